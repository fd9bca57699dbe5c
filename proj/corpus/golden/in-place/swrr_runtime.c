/* swrr_runtime.c v1 */
#define _POSIX_C_SOURCE 200809L

#include "swrr_runtime.h"

#include <pthread.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>
#include <sys/types.h>

static pthread_mutex_t swrr_lock = PTHREAD_MUTEX_INITIALIZER;
static char **swrr_set;
static size_t swrr_len;
static int swrr_loaded;
static int swrr_present;
static struct stat swrr_seen;

static const char *swrr_path(void) {
  const char *p = getenv("SWRR_CONFIG");
  return (p && *p) ? p : "./swrr.conf";
}

static int swrr_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

static void swrr_free(char **set, size_t len) {
  size_t i;
  for (i = 0; i < len; i++)
    free(set[i]);
  free(set);
}

static int swrr_has(char **set, size_t len, const char *option) {
  size_t i;
  for (i = 0; i < len; i++)
    if (strcmp(set[i], option) == 0)
      return 1;
  return 0;
}

/* Builds the new set aside and swaps it in whole. */
static void swrr_load(const char *path) {
  char **set = NULL;
  size_t len = 0, cap = 0;
  FILE *f = fopen(path, "r");
  if (f) {
    char *line = NULL;
    size_t line_cap = 0;
    ssize_t n;
    while ((n = getline(&line, &line_cap, f)) != -1) {
      char *s = line;
      char *e = line + n;
      while (s < e && swrr_space(*s))
        s++;
      while (e > s && swrr_space(e[-1]))
        e--;
      *e = '\0';
      if (s == e || *s == '#' || swrr_has(set, len, s))
        continue;
      if (len == cap) {
        size_t ncap = cap ? cap * 2 : 8;
        char **grown = realloc(set, ncap * sizeof *set);
        if (!grown)
          break;
        set = grown;
        cap = ncap;
      }
      set[len] = strdup(s);
      if (!set[len])
        break;
      len++;
    }
    free(line);
    fclose(f);
  }
  swrr_free(swrr_set, swrr_len);
  swrr_set = set;
  swrr_len = len;
}

static int swrr_changed(int present, const struct stat *st) {
  if (!swrr_loaded || present != swrr_present)
    return 1;
  if (!present)
    return 0;
  return st->st_mtim.tv_sec != swrr_seen.st_mtim.tv_sec || st->st_mtim.tv_nsec != swrr_seen.st_mtim.tv_nsec ||
         st->st_size != swrr_seen.st_size || st->st_ino != swrr_seen.st_ino;
}

int SWRR_enabled(const char *option) {
  struct stat st;
  const char *path;
  int present, hit;
  if (!option)
    return 0;
  pthread_mutex_lock(&swrr_lock);
  path = swrr_path();
  present = stat(path, &st) == 0;
  if (swrr_changed(present, &st)) {
    swrr_load(path);
    swrr_loaded = 1;
    swrr_present = present;
    if (present)
      swrr_seen = st;
  }
  hit = swrr_has(swrr_set, swrr_len, option);
  pthread_mutex_unlock(&swrr_lock);
  return hit;
}
