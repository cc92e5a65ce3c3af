#pragma once

#include <span>
#include <vector>

#include "vkge/model_spec.hpp"

namespace vkge {

// Σ_i r[i]·s[i]·o[i]. Evaluated as r·(s·o) so that swapping s and o is bitwise
// symmetric.
double score_distmult(std::span<const double> subject, std::span<const double> relation,
                      std::span<const double> object);

// Re(Σ_i r_i·s_i·conj(o_i)) over vectors laid out as [Re(k) | Im(k)].
double score_complex(std::span<const double> subject, std::span<const double> relation,
                     std::span<const double> object);

double score(Scorer scorer, std::span<const double> subject, std::span<const double> relation,
             std::span<const double> object);

struct ScoreGradients {
  std::vector<double> d_subject;
  std::vector<double> d_relation;
  std::vector<double> d_object;
};

ScoreGradients grad_score(Scorer scorer, std::span<const double> subject, std::span<const double> relation,
                          std::span<const double> object);

// Adds coeff·∂φ/∂(s, r, o) into the three output spans. The outputs may alias
// one another (s == o); contributions are summed.
void accumulate_score_gradients(Scorer scorer, std::span<const double> subject, std::span<const double> relation,
                                std::span<const double> object, double coeff, std::span<double> d_subject,
                                std::span<double> d_relation, std::span<double> d_object);

}  // namespace vkge
