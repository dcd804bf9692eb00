#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "dlfold.h"

#define CHECK(call)                                                    \
  do {                                                                 \
    DlfStatus st_ = (call);                                            \
    if (st_ != DLF_STATUS_OK) {                                        \
      fprintf(stderr, "%s: %d %s\n", #call, (int)st_, dlf_last_error()); \
      return 1;                                                        \
    }                                                                  \
  } while (0)

int main(void) {
  const double deg = M_PI / 180.0;
  DlfPattern *p = NULL;
  DlfMotion *m = NULL;
  size_t creases = 0;
  uint64_t count = 0;
  DlfRegime regime;
  double extreme = 0.0, residual = 0.0;

  CHECK(dlf_gen_miura(2, 2, 60 * deg, &p));
  CHECK(dlf_pattern_counts(p, NULL, &creases, NULL));
  CHECK(dlf_motion_new(p, &m));
  double *angles = malloc(creases * sizeof *angles);
  CHECK(dlf_motion_angles(m, 0.8, angles, creases));
  CHECK(dlf_pattern_fold_residual(p, angles, creases, &residual));
  CHECK(dlf_count_modes(6, &count));
  CHECK(dlf_classify_theta(DLF_MODE_AI, 60 * deg, 80 * deg, 90 * deg, &regime, &extreme));
  printf("dlfold %s creases=%zu residual_ok=%d modes=%llu regime=%d\n", dlf_version(), creases,
         residual < 1e-9, (unsigned long long)count, (int)regime);

  free(angles);
  dlf_motion_free(m);
  dlf_pattern_free(p);
  return 0;
}
