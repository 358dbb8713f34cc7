#include "ofdr/procedure.hpp"

#include <algorithm>

namespace ofdr {

OnlineProcedure::OnlineProcedure(GammaSequence gamma, double delta)
    : delta_(delta), gamma_(std::move(gamma)) {
  validate_delta(delta);
}

StepOutcome OnlineProcedure::step(double evidence, std::size_t deadline) {
  if (kind() == EvidenceKind::e_value) {
    validate_e_value(evidence);
  } else {
    validate_p_value(evidence);
  }
  const std::size_t t = t_ + 1;
  if (deadline < t) throw InputError("deadline precedes arrival at index " + std::to_string(t));
  StepOutcome out = advance(t, evidence, deadline);
  t_ = t;
  return out;
}

void OnlineProcedure::mark_rejected(std::size_t i) {
  if (flags_.size() <= i) flags_.resize(std::max(i + 1, 2 * flags_.size()), 0);
  if (flags_[i]) return;
  flags_[i] = 1;
  rejected_.push_back(i);
}

}  // namespace ofdr
