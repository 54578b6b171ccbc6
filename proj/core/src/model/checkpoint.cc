// core/src/model/checkpoint.cc

// Copyright 2026  pedfuse authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pedfuse/model/checkpoint.h"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace pedfuse {

namespace {
constexpr char kMagic[8] = {'P', 'F', 'C', 'K', 'P', 'T', '0', '1'};
}

void save_checkpoint(const PedFuseNet<float>& net, const std::string& path) {
  nlohmann::ordered_json header;
  header["config"] = nlohmann::ordered_json::parse(
      model_config_to_json(net.config()));
  header["tensors"] = nlohmann::ordered_json::array();
  const auto& store = net.params();
  for (size_t i = 0; i < store.size(); ++i)
    header["tensors"].push_back({{"name", store[i].name},
                                 {"group", store[i].group},
                                 {"shape", store[i].value.shape()},
                                 {"trainable", store[i].trainable}});
  const std::string htext = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("checkpoint: cannot create " + path);
  out.write(kMagic, 8);
  const uint64_t hlen = htext.size();
  out.write(reinterpret_cast<const char*>(&hlen), 8);
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  for (size_t i = 0; i < store.size(); ++i) {
    const auto& t = store[i].value;
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.numel() * sizeof(float)));
  }
  if (!out) throw IoError("checkpoint: write failed: " + path);
}

PedFuseNet<float> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("checkpoint: bad magic in " + path);
  uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), 8);
  if (!in || hlen == 0 || hlen > (1ull << 24))
    throw IoError("checkpoint: corrupt header length in " + path);
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw IoError("checkpoint: truncated header in " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(htext);
  } catch (const nlohmann::json::exception&) {
    throw IoError("checkpoint: unparsable header in " + path);
  }
  const ModelConfig cfg = model_config_from_json(header.at("config").dump());
  PedFuseNet<float> net(cfg);
  auto& store = net.params();
  const auto& tensors = header.at("tensors");
  if (tensors.size() != store.size())
    throw IoError("checkpoint: tensor count mismatch in " + path);
  for (size_t i = 0; i < store.size(); ++i) {
    const auto& rec = tensors.at(i);
    if (rec.at("name").get<std::string>() != store[i].name ||
        rec.at("shape").get<std::vector<int>>() != store[i].value.shape())
      throw IoError("checkpoint: tensor layout mismatch at " + store[i].name);
    in.read(reinterpret_cast<char*>(store[i].value.data()),
            static_cast<std::streamsize>(store[i].value.numel() * sizeof(float)));
    if (!in) throw IoError("checkpoint: truncated payload in " + path);
  }
  return net;
}

}  // namespace pedfuse
