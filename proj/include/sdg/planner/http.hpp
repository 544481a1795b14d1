#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "sdg/planner/planner.hpp"
#include "sdg/planner/prompts.hpp"

namespace sdg::planner {

struct HttpPlannerConfig {
  std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
  std::string chat_path = "/v1/chat/completions";
  std::string embeddings_path = "/v1/embeddings";
  std::string model = "gpt-4";
  std::string embedding_model = "text-embedding-ada-002";
  std::string key_env_var = "SDG_LLM_API_KEY";
  std::string prompt_dir;        // optional prompt-asset overrides
  std::string transcript_path;   // optional JSONL audit log
  int timeout_seconds = 60;
  int retries = 3;
};

// Chat-completion planner. All requests use temperature 0; transport failures
// are retried with exponential backoff before surfacing as TransportError;
// unusable reply content surfaces as FormatError. An injectable transport
// stands in for the network in tests (it receives the JSON request body for
// `path` and returns the JSON response body).
class HttpPlanner : public Planner {
 public:
  using Transport = std::function<std::string(const std::string& path, const std::string& body)>;

  explicit HttpPlanner(HttpPlannerConfig cfg, Transport transport = nullptr);

  Decomposition decompose(const std::string& instruction) override;
  ApiTranslation translate_api(const std::string& subgoal_description) override;
  EmbeddingVector embed(const std::string& text) override;
  std::string generate_program(const std::string& instruction,
                               const std::string& skill_api_docs) override;
  std::string debug_program(const std::string& instruction, const std::string& program_text,
                            const std::string& error_message) override;

  const PromptSet& prompts() const { return prompts_; }

 private:
  std::string chat(const std::string& system_prompt, const std::string& user_prompt);
  std::string post_json(const std::string& path, const std::string& body);
  void log_transcript(const std::string& request, const std::string& response);

  HttpPlannerConfig cfg_;
  PromptSet prompts_;
  Transport transport_;
  std::shared_mutex cache_mutex_;
  std::unordered_map<uint64_t, std::vector<double>> embed_cache_;
  std::mutex transcript_mutex_;
};

std::unique_ptr<Planner> make_http_planner(HttpPlannerConfig cfg);

}  // namespace sdg::planner
