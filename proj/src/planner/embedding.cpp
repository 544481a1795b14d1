#include "sdg/planner/embedding.hpp"

#include <cmath>

#include "sdg/common/errors.hpp"
#include "sdg/common/rng.hpp"

namespace sdg::planner {

std::vector<double> trigram_embedding(const std::string& text, int dim) {
  if (text.empty()) throw Error("trigram_embedding: empty text");
  const std::string padded = "^" + text + "$";
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  constexpr std::uint64_t kHashSeed = 0x5d67'1c39'aa1f'0b2dull;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = hash64(std::string_view(padded).substr(i, 3), kHashSeed);
    v[h % static_cast<std::uint64_t>(dim)] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& x : v) x /= norm;
  return v;
}

double cosine_sim(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("cosine_sim: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace sdg::planner
