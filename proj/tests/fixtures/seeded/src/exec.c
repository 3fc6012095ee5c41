#include <stdio.h>
#include <stdlib.h>

int launch(const char *cmd) {
    int rc = system(cmd);
    FILE *pipe = popen(cmd, "r");
    (void)pipe;
    return rc;
}
