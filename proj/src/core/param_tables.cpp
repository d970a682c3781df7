#include "core/param_tables.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gscir {

TaskKind task_from_name(const std::string& name) {
  if (name == "cs") return TaskKind::CS;
  if (name == "inpaint") return TaskKind::Inpaint;
  if (name == "textremove") return TaskKind::TextRemove;
  if (name == "deblur") return TaskKind::Deblur;
  if (name == "spn") return TaskKind::SPN;
  if (name == "denoise") return TaskKind::Denoise;
  throw std::invalid_argument("unknown task: " + name);
}

std::string task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::CS: return "cs";
    case TaskKind::Inpaint: return "inpaint";
    case TaskKind::TextRemove: return "textremove";
    case TaskKind::Deblur: return "deblur";
    case TaskKind::SPN: return "spn";
    case TaskKind::Denoise: return "denoise";
  }
  return "?";
}

namespace {

struct Row {
  double param;
  PenaltyParams half;       // p = 1/2
  PenaltyParams two_thirds;  // p = 2/3
};

const std::vector<Row> kCsRows = {
    {0.10, {8e-3, 0.10}, {9e-3, 0.04}},
    {0.20, {3e-2, 0.30}, {9e-3, 0.01}},
    {0.30, {5e-3, 0.01}, {5e-3, 0.005}},
    {0.40, {2.5e-2, 0.08}, {2.5e-2, 0.01}},
};

const std::vector<Row> kInpaintRows = {
    {0.80, {5e-3, 0.1}, {1.6e-1, 0.06}},
    {0.70, {1e-3, 0.025}, {1e-1, 0.05}},
    {0.50, {1e-3, 0.01}, {3e-1, 0.0007}},
};

const Row kTextRow = {0.0, {1e-3, 0.01}, {1e-2, 0.005}};

const std::vector<Row> kSpnRows = {
    {0.30, {1e-2, 0.15}, {1e-1, 0.05}},
    {0.50, {5e-3, 0.1}, {1e-2, 0.01}},
    {0.80, {5e-3, 0.4}, {2e-2, 0.03}},
};

bool half_exponent(double p) { return std::abs(p - 0.5) < 1e-3; }
bool two_thirds_exponent(double p) { return std::abs(p - 2.0 / 3.0) < 1e-3; }

PenaltyParams pick(const Row& row, double p) {
  if (half_exponent(p)) return row.half;
  if (two_thirds_exponent(p)) return row.two_thirds;
  throw std::invalid_argument(
      "no tabulated (mu, lambda) for this exponent; pass explicit values");
}

const Row& nearest(const std::vector<Row>& rows, double param) {
  const Row* best = &rows.front();
  double best_d = std::abs(rows.front().param - param);
  for (const auto& r : rows) {
    double d = std::abs(r.param - param);
    if (d < best_d) {
      best_d = d;
      best = &r;
    }
  }
  return *best;
}

}  // namespace

PenaltyParams default_params(TaskKind task, double param, double p) {
  switch (task) {
    case TaskKind::CS: return pick(nearest(kCsRows, param), p);
    case TaskKind::Inpaint: return pick(nearest(kInpaintRows, param), p);
    case TaskKind::TextRemove: return pick(kTextRow, p);
    case TaskKind::SPN: return pick(nearest(kSpnRows, param), p);
    case TaskKind::Deblur:
      throw std::invalid_argument("deblur defaults are keyed by kernel family");
    case TaskKind::Denoise:
      throw std::invalid_argument("denoise has no tabulated defaults");
  }
  throw std::logic_error("default_params: unknown task");
}

PenaltyParams deblur_params(const std::string& kernel_family, double p) {
  Row row{};
  if (kernel_family == "uniform")
    row = {0.0, {1e-2, 0.6}, {8e-2, 0.006}};
  else if (kernel_family == "gaussian")
    row = {0.0, {8e-3, 0.13}, {1.5e-2, 0.003}};
  else if (kernel_family == "motion")
    row = {0.0, {1e-2, 0.25}, {1e-2, 0.005}};
  else
    throw std::invalid_argument("unknown kernel family: " + kernel_family);
  return pick(row, p);
}

}  // namespace gscir
