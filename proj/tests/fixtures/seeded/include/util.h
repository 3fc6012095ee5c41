#ifndef SEEDED_UTIL_H
#define SEEDED_UTIL_H

#include <string.h>

static inline void copy_id(char *dst, const char *src) {
    strcpy(dst, src);
}

#endif
