#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "posw/error.hpp"
#include "posw/models.hpp"
#include "posw/weights.hpp"

namespace posw {

// New_score(t,d) = Old_score(t,d) + w * pos_weight(t).
struct IntegrationConfig {
  double w = 0.0;
  const WeightTable* weights = nullptr;

  void validate() const {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ConfigError("integration parameter w must be finite and >= 0");
  }
};

inline double integrated_term_score(double old_score, const std::string& term,
                                    const IntegrationConfig& config) {
  if (!config.weights) return old_score;
  return old_score + config.w * (*config.weights)(term);
}

// Same candidate set, ordering and tie rule as retrieve(); each matched
// query term's contribution carries its POS bonus once.
inline std::vector<ScoredDoc> retrieve_integrated(std::span<const std::string> query,
                                                  const InvertedIndex& index, ModelKind model,
                                                  const ModelParams& params,
                                                  const IntegrationConfig& config,
                                                  std::size_t k) {
  config.validate();
  return detail::retrieve_with(query, index, model, params, k,
                               [&](double old, const std::string& term) {
                                 return integrated_term_score(old, term, config);
                               });
}

}  // namespace posw
