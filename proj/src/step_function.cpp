#include "maxrep/step_function.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace maxrep {

StepFunction::StepFunction(std::int64_t off, std::vector<std::int8_t> s)
    : offset(off), steps(std::move(s)) {
  if (offset < 0) throw std::invalid_argument("StepFunction: negative offset");
  if (static_cast<std::int64_t>(steps.size()) != 2 * offset)
    throw std::invalid_argument("StepFunction: steps size must be 2*offset");
}

std::int64_t StepFunction::value_at(std::int64_t x) const {
  if (x <= -offset || x >= offset) return std::llabs(x);
  std::int64_t v = offset;
  for (std::int64_t m = -offset; m < x; ++m) v += steps[m + offset];
  return v;
}

std::vector<std::int64_t> StepFunction::heights() const {
  std::vector<std::int64_t> h(2 * offset + 1);
  h[0] = offset;
  for (std::int64_t k = 0; k < 2 * offset; ++k) h[k + 1] = h[k] + steps[k];
  return h;
}

bool StepFunction::is_valid() const {
  if (static_cast<std::int64_t>(steps.size()) != 2 * offset) return false;
  std::int64_t sum = 0;
  for (auto s : steps) {
    if (s != 1 && s != -1) return false;
    sum += s;
  }
  return sum == 0;
}

void StepFunction::normalize() {
  std::vector<std::int64_t> h = heights();
  std::int64_t dev = 0;
  for (std::int64_t m = -offset; m <= offset; ++m)
    if (h[m + offset] != std::llabs(m))
      dev = std::max<std::int64_t>(dev, std::llabs(m) + 1);
  // dev is now the smallest L with f(m) = |m| for all |m| >= L
  if (dev == offset) return;
  std::vector<std::int8_t> s(steps.begin() + (offset - dev),
                             steps.end() - (offset - dev));
  offset = dev;
  steps = std::move(s);
}

std::string StepFunction::to_string() const {
  std::string out = std::to_string(offset) + ":";
  for (auto s : steps) out += (s > 0 ? '+' : '-');
  return out;
}

StepFunction StepFunction::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("StepFunction::parse: missing ':'");
  std::int64_t off = std::stoll(text.substr(0, colon));
  std::vector<std::int8_t> s;
  for (std::size_t i = colon + 1; i < text.size(); ++i) {
    if (text[i] == '+')
      s.push_back(1);
    else if (text[i] == '-')
      s.push_back(-1);
    else
      throw std::invalid_argument("StepFunction::parse: bad step char");
  }
  return StepFunction(off, std::move(s));
}

StepFunction to_step_function(const Partition& lambda) {
  std::int64_t L = std::max(lambda.rows(), lambda.first());
  std::vector<std::int8_t> steps(2 * L, 1);
  // down-steps at lambda_i - i (1-based), with lambda_i = 0 for i > rows
  for (std::int64_t i = 1; i <= L; ++i) {
    std::int64_t li = i <= lambda.rows() ? lambda.parts[i - 1] : 0;
    steps[li - i + L] = -1;
  }
  return StepFunction(L, std::move(steps));
}

Partition from_step_function(const StepFunction& f) {
  if (!f.is_valid())
    throw std::invalid_argument("from_step_function: invalid step function");
  std::vector<int> parts;
  int i = 0;  // 1-based row index of the next down-step, scanning right to left
  for (std::int64_t k = 2 * f.offset - 1; k >= 0; --k) {
    if (f.steps[k] < 0) {
      ++i;
      std::int64_t part = (k - f.offset) + i;
      if (part > 0) parts.push_back(static_cast<int>(part));
    }
  }
  return Partition(std::move(parts));
}

std::vector<std::int64_t> hooks_from_steps(const StepFunction& f) {
  std::vector<std::int64_t> hooks;
  std::vector<std::int64_t> ups;
  for (std::int64_t k = 0; k < 2 * f.offset; ++k) {
    if (f.steps[k] > 0) {
      ups.push_back(k);
    } else {
      for (std::int64_t i : ups) hooks.push_back(k - i);
    }
  }
  return hooks;
}

std::int64_t area(const StepFunction& f) {
  std::vector<std::int64_t> h = f.heights();
  std::int64_t quad = 0;  // 4 * N(f) via exact trapezoids of f - |x|
  for (std::int64_t m = -f.offset; m < f.offset; ++m)
    quad += (h[m + f.offset] - std::llabs(m)) + (h[m + 1 + f.offset] - std::llabs(m + 1));
  if (quad % 4 != 0)
    throw std::logic_error("area: trapezoid sum not divisible by 4");
  return quad / 4;
}

}  // namespace maxrep
