#include <string.h>

void clone_frame(unsigned char *dst, const unsigned char *src, unsigned len) {
    memcpy(dst, src, len);
}
