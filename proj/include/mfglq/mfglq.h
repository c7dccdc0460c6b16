// Copyright 2026 The mfglq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the mfglq solver library.
 *
 * Every function returns an mfglq_status; on failure the message is
 * available from mfglq_last_error() on the calling thread until the next
 * call. Handles are opaque and owned by the caller.
 */
#ifndef MFGLQ_MFGLQ_H_
#define MFGLQ_MFGLQ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MFGLQ_API __declspec(dllexport)
#else
#define MFGLQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfglq_status {
  MFGLQ_OK = 0,
  MFGLQ_INVALID_ARGUMENT = 1,
  MFGLQ_CONFIG_ERROR = 2,
  MFGLQ_VALIDATION_ERROR = 3,
  MFGLQ_BLOWUP = 4,
  MFGLQ_IO_ERROR = 5,
  MFGLQ_CHECK_FAILED = 6,
  MFGLQ_SIMULATION_ERROR = 7,
  MFGLQ_INTERNAL_ERROR = 8
} mfglq_status;

typedef enum mfglq_command {
  MFGLQ_CMD_SOLVE = 0,
  MFGLQ_CMD_CHAOS = 1,
  MFGLQ_CMD_TRAJECTORIES = 2,
  MFGLQ_CMD_NASH_CHECK = 3,
  MFGLQ_CMD_SIMULATE = 4
} mfglq_command;

typedef enum mfglq_gain {
  MFGLQ_MAJOR_PHI0 = 0,
  MFGLQ_MAJOR_PHI1 = 1,
  MFGLQ_MAJOR_PHI2 = 2,
  MFGLQ_MINOR_PHI0 = 3,
  MFGLQ_MINOR_PHI1 = 4,
  MFGLQ_MINOR_PHI2 = 5,
  MFGLQ_MINOR_PHI3 = 6
} mfglq_gain;

typedef struct mfglq_config mfglq_config;
typedef struct mfglq_solution mfglq_solution;

MFGLQ_API const char* mfglq_version(void);
MFGLQ_API const char* mfglq_last_error(void);
MFGLQ_API const char* mfglq_status_string(mfglq_status status);
/* Warnings of the last successful mfglq_run on this thread, one per line. */
MFGLQ_API const char* mfglq_last_warnings(void);

MFGLQ_API mfglq_status mfglq_config_load(const char* path, mfglq_config** out);
MFGLQ_API mfglq_status mfglq_config_parse(const char* json_text, mfglq_config** out);
MFGLQ_API mfglq_status mfglq_config_set_seed(mfglq_config* config, uint64_t seed);
MFGLQ_API mfglq_status mfglq_config_set_n_steps(mfglq_config* config, int n_steps);
MFGLQ_API mfglq_status mfglq_config_set_output(mfglq_config* config, const char* dir);
/* Copies the 16-hex-digit config hash (NUL terminated) into buf. */
MFGLQ_API mfglq_status mfglq_config_hash(const mfglq_config* config, char* buf,
                                         size_t buf_size);
MFGLQ_API void mfglq_config_destroy(mfglq_config* config);

/* Runs one CLI command and writes its output files. MFGLQ_CHECK_FAILED is
 * returned when nash-check completes but the equilibrium fails the check. */
MFGLQ_API mfglq_status mfglq_run(const mfglq_config* config, mfglq_command command);

/* Solves the configured game with the configured solver. */
MFGLQ_API mfglq_status mfglq_solve(const mfglq_config* config, mfglq_solution** out);
MFGLQ_API mfglq_status mfglq_solution_residual(const mfglq_solution* solution,
                                               double* residual);
MFGLQ_API mfglq_status mfglq_solution_num_nodes(const mfglq_solution* solution,
                                                int* nodes);
MFGLQ_API mfglq_status mfglq_solution_gain_shape(const mfglq_solution* solution,
                                                 mfglq_gain gain, int* rows, int* cols);
/* Writes the gain at `node` in column-major order; `size` is the capacity of
 * `values` in doubles. */
MFGLQ_API mfglq_status mfglq_solution_gain(const mfglq_solution* solution,
                                           mfglq_gain gain, int node, double* values,
                                           size_t size);
MFGLQ_API void mfglq_solution_destroy(mfglq_solution* solution);

#ifdef __cplusplus
}
#endif

#endif  // MFGLQ_MFGLQ_H_
