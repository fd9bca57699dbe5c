/* swrr_runtime.h v1 */
#ifndef SWRR_RUNTIME_H
#define SWRR_RUNTIME_H

#ifdef __cplusplus
extern "C" {
#endif

/* 1 if `option` is listed in the SWRR configuration file, else 0. */
int SWRR_enabled(const char *option);

#ifdef __cplusplus
}
#endif

#endif
