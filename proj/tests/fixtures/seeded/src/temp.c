#include <stdio.h>
#include <stdlib.h>

const char *scratch_name(void) {
    return tmpnam(0);
}

char *scratch_template(char *pattern) {
    return mktemp(pattern);
}
