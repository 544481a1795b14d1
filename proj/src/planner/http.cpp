#include "sdg/planner/http.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include <httplib.h>

#include "sdg/common/rng.hpp"
#include "sdg/planner/extract.hpp"

namespace sdg::planner {

namespace {

using nlohmann::json;

// splits "https://host:port" into (host-with-scheme, ok)
bool endpoint_valid(const std::string& endpoint) {
  return endpoint.rfind("http://", 0) == 0 || endpoint.rfind("https://", 0) == 0;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

HttpPlanner::HttpPlanner(HttpPlannerConfig cfg, Transport transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
  prompts_ = cfg_.prompt_dir.empty() ? default_prompts() : load_prompts(cfg_.prompt_dir);
  if (!transport_ && !endpoint_valid(cfg_.endpoint))
    throw ConfigError("planner endpoint must start with http:// or https://: " + cfg_.endpoint);
}

void HttpPlanner::log_transcript(const std::string& request, const std::string& response) {
  if (cfg_.transcript_path.empty()) return;
  std::lock_guard<std::mutex> lock(transcript_mutex_);
  std::ofstream out(cfg_.transcript_path, std::ios::app);
  json line{{"timestamp", iso_timestamp()}, {"request", request}, {"response", response}};
  out << line.dump() << "\n";
}

std::string HttpPlanner::post_json(const std::string& path, const std::string& body) {
  std::string last_error;
  for (int attempt = 0; attempt < cfg_.retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(1000L << (attempt - 1)));
    try {
      std::string response;
      if (transport_) {
        response = transport_(path, body);
      } else {
        httplib::Client client(cfg_.endpoint);
        client.set_connection_timeout(cfg_.timeout_seconds);
        client.set_read_timeout(cfg_.timeout_seconds);
        httplib::Headers headers;
        const char* key = std::getenv(cfg_.key_env_var.c_str());
        if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
          last_error = "transport failure: " + httplib::to_string(res.error());
          continue;
        }
        if (res->status < 200 || res->status >= 300) {
          last_error = "HTTP status " + std::to_string(res->status) + ": " + res->body;
          continue;
        }
        response = res->body;
      }
      log_transcript(body, response);
      return response;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw TransportError("request to " + path + " failed after " + std::to_string(cfg_.retries) +
                       " attempts: " + last_error);
}

std::string HttpPlanner::chat(const std::string& system_prompt, const std::string& user_prompt) {
  json request{{"model", cfg_.model},
               {"temperature", 0},
               {"messages", json::array({json{{"role", "system"}, {"content", system_prompt}},
                                         json{{"role", "user"}, {"content", user_prompt}}})}};
  const std::string body = post_json(cfg_.chat_path, request.dump());
  try {
    const json reply = json::parse(body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw FormatError("chat response is not a completion object: " + std::string(e.what()));
  }
}

Decomposition HttpPlanner::decompose(const std::string& instruction) {
  const std::string content =
      chat(decompose_system_prompt(prompts_), decompose_user_prompt(instruction));
  return extract_decomposition(instruction, content);
}

ApiTranslation HttpPlanner::translate_api(const std::string& subgoal_description) {
  const std::string content =
      chat(translate_system_prompt(prompts_), translate_user_prompt(subgoal_description));
  return extract_api_call(content);
}

EmbeddingVector HttpPlanner::embed(const std::string& text) {
  if (text.empty()) throw Error("cannot embed empty text");
  const uint64_t key = hash64(text, 0x9e3779b97f4a7c15ull);
  {
    std::shared_lock<std::shared_mutex> lock(cache_mutex_);
    auto it = embed_cache_.find(key);
    if (it != embed_cache_.end()) return {it->second, "http"};
  }
  json request{{"model", cfg_.embedding_model}, {"input", json::array({text})}};
  const std::string body = post_json(cfg_.embeddings_path, request.dump());
  std::vector<double> values;
  try {
    const json reply = json::parse(body);
    for (const auto& v : reply.at("data").at(0).at("embedding")) values.push_back(v.get<double>());
  } catch (const json::exception& e) {
    throw FormatError("embedding response malformed: " + std::string(e.what()));
  }
  if (values.empty()) throw FormatError("embedding response carries no values");
  {
    std::unique_lock<std::shared_mutex> lock(cache_mutex_);
    embed_cache_.emplace(key, values);
  }
  return {std::move(values), "http"};
}

std::string HttpPlanner::generate_program(const std::string& instruction,
                                          const std::string& skill_api_docs) {
  const std::string content =
      chat(generate_system_prompt(prompts_, skill_api_docs), generate_user_prompt(instruction));
  return extract_program_text(content);
}

std::string HttpPlanner::debug_program(const std::string& instruction,
                                       const std::string& program_text,
                                       const std::string& error_message) {
  const std::string content = chat(debug_system_prompt(prompts_, ""),
                                   debug_user_prompt(instruction, program_text, error_message));
  return extract_program_text(content);
}

std::unique_ptr<Planner> make_http_planner(HttpPlannerConfig cfg) {
  return std::make_unique<HttpPlanner>(std::move(cfg));
}

}  // namespace sdg::planner
