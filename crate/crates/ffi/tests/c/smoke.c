#include <math.h>
#include <stdio.h>
#include <string.h>

#include "sepfaces.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      const char *msg = sf_last_error_message();                      \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,  \
              msg ? msg : "no error");                                \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  SfOperator *rho = NULL, *face = NULL, *drop = NULL;
  size_t p = 0, q = 0;
  bool ppt = false;
  double eps = 0.0;
  char *json = NULL;

  CHECK(sf_gallery_rho_b(2.0, &rho) == SF_STATUS_OK);
  CHECK(sf_operator_state_type(rho, &p, &q) == SF_STATUS_OK);
  CHECK(p == 4 && q == 4);
  CHECK(sf_operator_is_ppt(rho, &ppt) == SF_STATUS_OK && ppt);

  CHECK(sf_gallery_choi_face_state(2.0, -1, &face) == SF_STATUS_OK);
  CHECK(sf_gallery_choi_face_state(2.0, 0, &drop) == SF_STATUS_OK);
  CHECK(sf_max_epsilon_ppt(drop, face, &eps) == SF_STATUS_OK);
  CHECK(fabs(eps - 0.2) < 1e-7);

  CHECK(sf_operator_to_json(rho, &json) == SF_STATUS_OK);
  CHECK(strstr(json, "\"entries\"") != NULL);
  sf_string_free(json);

  CHECK(sf_operator_from_json(NULL, &rho) == SF_STATUS_NULL_POINTER);
  CHECK(sf_last_error_message() != NULL);
  CHECK(sf_gallery_rho_b(1.0, &rho) == SF_STATUS_DOMAIN);

  sf_operator_free(rho);
  sf_operator_free(face);
  sf_operator_free(drop);
  printf("ok %s\n", sf_version());
  return 0;
}
