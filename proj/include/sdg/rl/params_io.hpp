#pragma once

#include <string>

#include "sdg/rl/net.hpp"

namespace sdg::rl {

// Parameter file layout: 8-byte magic "SDGPARAM", a little-endian u64 giving
// the JSON manifest's byte length, the manifest (dtype, architecture, tensor
// names/shapes/byte offsets), then the raw little-endian f32 blob in registry
// order. save->load round-trips bitwise.
void save_params(const ActorCriticNet<float>& net, const std::string& path);
ActorCriticNet<float> load_params(const std::string& path);

}  // namespace sdg::rl
