/* Line-driven harness shared by the corpus drivers.
 *
 * Each input line is `<function> <int>`; the driver calls the function and
 * prints `<function> -> <result>`. `wait` blocks until a file named `go`
 * appears in the working directory, then removes it. */
#ifndef CORPUS_HARNESS_H
#define CORPUS_HARNESS_H

#define _POSIX_C_SOURCE 200809L

#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <time.h>
#include <unistd.h>

/* Provided by each driver: 1 if `name` was handled. */
static int dispatch(const char *name, int arg);

static inline void print_int(const char *name, int v) { printf("%s -> %d\n", name, v); }
static inline void print_ptr(const char *name, const void *p) { printf("%s -> %s\n", name, p ? "ptr" : "NULL"); }
static inline void print_void(const char *name) { printf("%s -> void\n", name); }

static void wait_for_go(void) {
  struct timespec nap = {0, 10000000};
  int i;
  for (i = 0; i < 1000; i++) {
    if (access("go", F_OK) == 0) {
      remove("go");
      return;
    }
    nanosleep(&nap, NULL);
  }
  printf("wait timed out\n");
}

int main(void) {
  char line[256];
  while (fgets(line, sizeof line, stdin)) {
    char name[128];
    int arg = 0;
    if (sscanf(line, "%127s %d", name, &arg) < 1)
      continue;
    if (strcmp(name, "wait") == 0) {
      fflush(stdout);
      wait_for_go();
      continue;
    }
    if (!dispatch(name, arg))
      printf("%s: unknown\n", name);
    fflush(stdout);
  }
  printf("done\n");
  return 0;
}

#endif
