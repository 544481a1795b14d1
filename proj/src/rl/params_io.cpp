#include "sdg/rl/params_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sdg/common/errors.hpp"

namespace sdg::rl {

namespace {

constexpr char kMagic[8] = {'S', 'D', 'G', 'P', 'A', 'R', 'A', 'M'};

nlohmann::json net_config_json(const NetConfig& cfg) {
  return {
      {"emb_dim", cfg.emb_dim},
      {"conv1_channels", cfg.conv1_channels},
      {"conv2_channels", cfg.conv2_channels},
      {"img_features", cfg.img_features},
      {"text_emb_dim", cfg.text_emb_dim},
      {"text_hidden", cfg.text_hidden},
      {"joint_features", cfg.joint_features},
      {"num_actions", cfg.num_actions},
      {"vocab_size", cfg.vocab_size},
      {"text_encoder_enabled", cfg.text_encoder_enabled},
  };
}

NetConfig net_config_from_json(const nlohmann::json& j) {
  NetConfig cfg;
  cfg.emb_dim = j.at("emb_dim").get<int>();
  cfg.conv1_channels = j.at("conv1_channels").get<int>();
  cfg.conv2_channels = j.at("conv2_channels").get<int>();
  cfg.img_features = j.at("img_features").get<int>();
  cfg.text_emb_dim = j.at("text_emb_dim").get<int>();
  cfg.text_hidden = j.at("text_hidden").get<int>();
  cfg.joint_features = j.at("joint_features").get<int>();
  cfg.num_actions = j.at("num_actions").get<int>();
  cfg.vocab_size = j.at("vocab_size").get<int>();
  cfg.text_encoder_enabled = j.at("text_encoder_enabled").get<bool>();
  return cfg;
}

void write_u64_le(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64_le(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void save_params(const ActorCriticNet<float>& net, const std::string& path) {
  nlohmann::json manifest;
  manifest["dtype"] = "f32";
  manifest["net"] = net_config_json(net.config());
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& t : net.tensors()) {
    tensors.push_back({{"name", t.name},
                       {"shape", t.shape},
                       {"offset", t.offset * sizeof(float)}});
  }
  manifest["tensors"] = std::move(tensors);
  const std::string mtext = manifest.dump();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open parameter file for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_u64_le(os, mtext.size());
  os.write(mtext.data(), static_cast<std::streamsize>(mtext.size()));
  os.write(reinterpret_cast<const char*>(net.params().data()),
           static_cast<std::streamsize>(net.params().size() * sizeof(float)));
  if (!os) throw IoError("failed writing parameter file: " + path);
}

ActorCriticNet<float> load_params(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open parameter file: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("not a parameter file: " + path);
  const std::uint64_t mlen = read_u64_le(is);
  if (!is) throw IoError("truncated parameter file at byte offset 8: " + path);
  std::string mtext(mlen, '\0');
  is.read(mtext.data(), static_cast<std::streamsize>(mlen));
  if (!is)
    throw IoError("truncated parameter file at byte offset " +
                  std::to_string(16 + is.gcount()) + ": " + path);

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(mtext);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad parameter manifest in " + path + ": " + e.what());
  }
  if (manifest.at("dtype").get<std::string>() != "f32")
    throw IoError("unsupported dtype in parameter file: " + path);

  ActorCriticNet<float> net(net_config_from_json(manifest.at("net")));
  const auto& tensors = manifest.at("tensors");
  if (tensors.size() != net.tensors().size())
    throw Error("parameter manifest lists " + std::to_string(tensors.size()) + " tensors, net has " +
                std::to_string(net.tensors().size()));
  for (std::size_t i = 0; i < net.tensors().size(); ++i) {
    const TensorSpec& expect = net.tensors()[i];
    const auto& got = tensors[i];
    if (got.at("name").get<std::string>() != expect.name)
      throw Error("parameter manifest tensor " + std::to_string(i) + " is '" +
                  got.at("name").get<std::string>() + "', expected '" + expect.name + "'");
    if (got.at("shape").get<std::vector<int>>() != expect.shape)
      throw Error("tensor shape mismatch for '" + expect.name + "' in " + path);
    if (got.at("offset").get<std::size_t>() != expect.offset * sizeof(float))
      throw Error("tensor offset mismatch for '" + expect.name + "' in " + path);
  }

  const std::streamoff blob_start = static_cast<std::streamoff>(16 + mlen);
  is.read(reinterpret_cast<char*>(net.params().data()),
          static_cast<std::streamsize>(net.params().size() * sizeof(float)));
  if (is.gcount() != static_cast<std::streamsize>(net.params().size() * sizeof(float)))
    throw IoError("truncated parameter file at byte offset " +
                  std::to_string(blob_start + is.gcount()) + ": " + path);
  return net;
}

}  // namespace sdg::rl
