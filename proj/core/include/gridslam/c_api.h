/* C interface over gridslam::Environment for language bindings.
 *
 * Every function returns 0 on success and a negative code on failure; the
 * message of the last failure on the calling thread is available through
 * gridslam_last_error(). Actions: 0 forward, 1 rotate left, 2 rotate right.
 */
#ifndef GRIDSLAM_C_API_H_
#define GRIDSLAM_C_API_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gridslam_env gridslam_env;

typedef struct gridslam_step_info {
  double reward;
  int done;
  int collision;
  uint64_t new_cells;
  double explored_area;
  double x;
  double y;
  double theta;
} gridslam_step_info;

enum {
  GRIDSLAM_OK = 0,
  GRIDSLAM_E_INVALID = -1,
  GRIDSLAM_E_SCHEMA = -2,
  GRIDSLAM_E_PARSE = -3,
  GRIDSLAM_E_STATE = -4,
  GRIDSLAM_E_BUFFER = -5,
  GRIDSLAM_E_INTERNAL = -6
};

/* config_json and plan_json are UTF-8 documents. */
int gridslam_env_create(const char* config_json, const char* plan_json, uint64_t seed,
                        gridslam_env** out);
void gridslam_env_destroy(gridslam_env* env);

/* Observation side length in cells, known before the first reset. */
int gridslam_env_observation_side(const gridslam_env* env, int* side);

int gridslam_env_seed(gridslam_env* env, uint64_t seed);

/* `observation` receives side*side bytes in the observation palette. */
int gridslam_env_reset(gridslam_env* env, uint8_t* observation, size_t capacity,
                       gridslam_step_info* info);
int gridslam_env_step(gridslam_env* env, int action, uint8_t* observation, size_t capacity,
                      gridslam_step_info* info);

const char* gridslam_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* GRIDSLAM_C_API_H_ */
