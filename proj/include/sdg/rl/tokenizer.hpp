#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace sdg::rl {

// Closed-vocabulary tokenizer for conditioning text: lowercase whitespace
// split; tokens outside the vocabulary (articles, goal numbering, etc.) are
// dropped. The vocabulary covers the six colors, three object types, "door",
// and the nine skill verb names.
class Tokenizer {
 public:
  Tokenizer();

  const std::vector<std::string>& vocab() const { return vocab_; }
  int vocab_size() const { return static_cast<int>(vocab_.size()); }

  // Returns vocabulary indices of known tokens, in order of appearance.
  std::vector<int> encode(const std::string& text) const;

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace sdg::rl
