#include <string.h>

/* strcpy(a, b) inside a block comment is not a call */
static const char *kHint = "usage: strcpy(dst, src)";
// system("rm -rf /") stays inside this line comment

int my_strcpy(char *dst, const char *src) {
    (void)dst;
    (void)src;
    return 0;
}

int system_ready(int flag) {
    return flag ? my_strcpy(0, 0) : 0;
}
