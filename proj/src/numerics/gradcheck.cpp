#include "auginf/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace auginf::nn {
namespace {

double evaluate(const LossBuilder& f, Mode mode) {
  Tape t(mode);
  return f(t).value().item();
}

}  // namespace

GradCheckReport grad_check(const LossBuilder& f, std::span<Parameter* const> params, double step, double tol,
                           Mode mode) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape t(mode);
    Var loss = f(t);
    t.backward(loss);
  }
  std::vector<Tensor2> analytic;
  for (Parameter* p : params) analytic.push_back(p->grad);

  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (std::size_t r = 0; r < p.value.rows(); ++r) {
      for (std::size_t c = 0; c < p.value.cols(); ++c) {
        const double orig = p.value(r, c);
        p.value(r, c) = orig + step;
        const double up = evaluate(f, mode);
        p.value(r, c) = orig - step;
        const double down = evaluate(f, mode);
        p.value(r, c) = orig;

        const double numeric = (up - down) / (2.0 * step);
        const double a = analytic[k](r, c);
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-3});
        const double err = std::abs(a - numeric) / denom;
        ++report.coordinates;
        if (err > report.max_rel_error || std::isnan(err)) {
          report.max_rel_error = std::isnan(err) ? INFINITY : err;
          report.worst = p.name + "[" + std::to_string(r) + "," + std::to_string(c) + "]";
        }
      }
    }
  }
  report.passed = report.max_rel_error <= tol;
  for (Parameter* p : params) p->zero_grad();
  return report;
}

GradCheckReport grad_check(const std::function<Var(Tape&, Var)>& f, const Tensor2& point, double step, double tol,
                           Mode mode) {
  Parameter x("x", point);
  Parameter* ps[] = {&x};
  return grad_check([&](Tape& t) { return f(t, t.param(x)); }, ps, step, tol, mode);
}

}  // namespace auginf::nn
