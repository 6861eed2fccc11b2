#include <stdarg.h>
#include <stdio.h>

int sum_ints(int count, ...) {
  va_list ap;
  va_start(ap, count);
  int s = 0;
  for (int i = 0; i < count; i++)
    s += va_arg(ap, int);
  va_end(ap);
  return s;
}

double avg_doubles(int count, ...) {
  va_list ap;
  va_start(ap, count);
  double s = 0;
  for (int i = 0; i < count; i++)
    s += va_arg(ap, double);
  va_end(ap);
  return count ? s / count : 0;
}

void log_line(const char *fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  vfprintf(stderr, fmt, ap);
  va_end(ap);
  fputc('\n', stderr);
}

int report(int a, int b) {
  log_line("a=%d b=%d", a, b);
  printf("%d\n", sum_ints(2, a, b));
  return 0;
}
