/* Compiled as C: the public header must stay C-compatible. */
#include <math.h>
#include <stddef.h>

#include "qfent/qfent.h"

static double flat(const double* x, int dimension, void* user) {
  (void)x;
  (void)dimension;
  return *(const double*)user;
}

int capi_smoke_c(void) {
  qfent_symbol* q = NULL;
  qfent_entropy e;
  double zero = 0.0;
  int failures = 0;
  if (qfent_symbol_thermal(1, flat, &zero, 3.0, 0.0, &q) != QFENT_OK) return 100;
  if (qfent_renyi_density(q, 2.0, NULL, &e) != QFENT_OK) failures++;
  if (fabs(e.value - log(2.0)) > 1e-12) failures++;
  if (qfent_renyi_density(q, 0.0, NULL, &e) != QFENT_ERR_INVALID_ARGUMENT) failures++;
  qfent_symbol_free(q);
  return failures;
}
