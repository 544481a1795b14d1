#pragma once

#include <string>
#include <vector>

namespace sdg::planner {

inline constexpr int kEmbeddingDim = 256;

// L2-normalized hashed character-trigram counts of "^text$" with a fixed hash
// seed; deterministic across runs and platforms. Throws on empty text.
std::vector<double> trigram_embedding(const std::string& text, int dim = kEmbeddingDim);

double cosine_sim(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sdg::planner
