/* Times CALLS calls of hot_sum(n) for a few loop lengths n. */
#define _POSIX_C_SOURCE 200809L

#include <stdio.h>
#include <stdlib.h>
#include <time.h>

int hot_sum(int n);

void log_msg(const char *fmt, ...) { (void)fmt; }

static double now(void) {
  struct timespec t;
  clock_gettime(CLOCK_MONOTONIC, &t);
  return (double)t.tv_sec + (double)t.tv_nsec * 1e-9;
}

int main(int argc, char **argv) {
  long calls = argc > 1 ? atol(argv[1]) : 10000000L;
  int i;
  for (i = 2; i < argc; i++) {
    int n = atoi(argv[i]);
    long k, sink = 0;
    double t = now();
    for (k = 0; k < calls; k++)
      sink += hot_sum(n);
    t = now() - t;
    printf("n=%d calls=%ld seconds=%.3f ns_per_call=%.1f sink=%ld\n", n, calls, t, t * 1e9 / (double)calls, sink);
  }
  return 0;
}
