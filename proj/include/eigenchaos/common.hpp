#pragma once
#include <stdexcept>
#include <string>

namespace eigenchaos {

// Bad inputs: malformed configs, out-of-range indices, infeasible requests.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The symmetric eigensolver failed to converge. Kept distinct so callers can
// tell "inputs were bad" from "the decomposition itself broke down".
class EighError : public std::runtime_error {
 public:
  explicit EighError(const std::string& what) : std::runtime_error(what) {}
};

// A well-formed input failed a substantive check: an identity z-score out of
// range, a partition violating admissibility, a theoretical bound breached.
// The CLI maps this to exit code 3 (vs 1 for malformed input).
class CheckFailure : public std::runtime_error {
 public:
  explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

// An eigenvalue gap fell below the guard tolerance, so gap-sensitive
// quantities (overlaps, derivatives, S_alpha) are not trustworthy. Callers
// typically redraw the offending sample and count the event.
class NearDegenerateError : public std::runtime_error {
 public:
  NearDegenerateError(int alpha, double gap, double tol)
      : std::runtime_error("near-degenerate spectrum at alpha=" + std::to_string(alpha) +
                           ": gap " + std::to_string(gap) + " < tol " + std::to_string(tol)),
        alpha(alpha),
        gap(gap),
        tol(tol) {}
  int alpha;
  double gap;
  double tol;
};

}  // namespace eigenchaos
