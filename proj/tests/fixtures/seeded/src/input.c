#include <stdio.h>

/* gets( */
int read_line(char *buf) {
    gets(buf);
    return 0;
}
