#pragma once

#include <string>

namespace gscir {

enum class TaskKind { CS, Inpaint, TextRemove, Deblur, SPN, Denoise };

TaskKind task_from_name(const std::string& name);
std::string task_name(TaskKind kind);

struct PenaltyParams {
  double mu;
  double lambda;
};

// Built-in (mu, lambda) defaults keyed by task, task parameter and
// exponent p. Off-grid parameters resolve to the nearest tabulated
// column; p must be 1/2 or 2/3 (other exponents have no tabulated
// defaults and require explicit values).
//   CS:        param = subrate  in {0.10, 0.20, 0.30, 0.40}
//   Inpaint:   param = missing  in {0.50, 0.70, 0.80}
//   TextRemove: param ignored (single column)
//   Deblur:    kernel family via deblur_params
//   SPN:       param = density  in {0.30, 0.50, 0.80}
PenaltyParams default_params(TaskKind task, double param, double p);
PenaltyParams deblur_params(const std::string& kernel_family, double p);

}  // namespace gscir
