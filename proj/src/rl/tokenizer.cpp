#include "sdg/rl/tokenizer.hpp"

#include <cctype>

namespace sdg::rl {

Tokenizer::Tokenizer()
    : vocab_{
          "red", "green", "blue", "purple", "yellow", "grey",
          "ball", "box", "key",
          "door",
          "discover_object", "go_next_to", "pick", "put_next_to",
          "discover_door", "go_to_door", "open_door",
          "find_unexplored_door", "enter_unexplored_room",
      } {
  for (int i = 0; i < static_cast<int>(vocab_.size()); ++i) index_[vocab_[i]] = i;
}

std::vector<int> Tokenizer::encode(const std::string& text) const {
  std::vector<int> out;
  std::string word;
  auto flush_word = [&] {
    if (word.empty()) return;
    // Trim punctuation hanging off the edges ("ball," -> "ball").
    size_t b = 0, e = word.size();
    auto core = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (b < e && !core(word[b])) ++b;
    while (e > b && !core(word[e - 1])) --e;
    if (e > b) {
      auto it = index_.find(word.substr(b, e - b));
      if (it != index_.end()) out.push_back(it->second);
    }
    word.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush_word();
    } else {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  flush_word();
  return out;
}

}  // namespace sdg::rl
