// core/src/ingest/store.cc

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

#include "pedfuse/ingest/store.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pedfuse/image.h"

namespace pedfuse {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Candidate {
  size_t window = 0;
  size_t frame_index = 0;
  double t_start = 0.0;
  double t_center = 0.0;
  double energy = 0.0;
  int split = 0;
  bool kept = true;
};

std::string sample_name(size_t window) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%06zu", window);
  return buf;
}

// Shape-prefixed little-endian float32 record: u32 ndim, u32 dims, payload.
size_t append_mel_record(std::ofstream& out, const Tensor<float>& t) {
  const size_t offset = static_cast<size_t>(out.tellp());
  const uint32_t ndim = static_cast<uint32_t>(t.ndim());
  out.write(reinterpret_cast<const char*>(&ndim), 4);
  for (int i = 0; i < t.ndim(); ++i) {
    const uint32_t d = static_cast<uint32_t>(t.dim(i));
    out.write(reinterpret_cast<const char*>(&d), 4);
  }
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.numel() * sizeof(float)));
  if (!out) throw IoError("store: mel.bin write failed");
  return offset;
}

Tensor<float> read_mel_record(std::ifstream& in, size_t offset) {
  in.seekg(static_cast<std::streamoff>(offset));
  uint32_t ndim = 0;
  in.read(reinterpret_cast<char*>(&ndim), 4);
  PF_CHECK_MSG(in && ndim >= 1 && ndim <= 4, "store: corrupt mel record");
  std::vector<int> shape(ndim);
  for (auto& d : shape) {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    d = static_cast<int>(v);
  }
  Tensor<float> t(shape);
  in.read(reinterpret_cast<char*>(t.data()),
          static_cast<std::streamsize>(t.numel() * sizeof(float)));
  PF_CHECK_MSG(static_cast<bool>(in), "store: truncated mel record");
  return t;
}

double energy_of_block(const std::vector<std::vector<float>>& block) {
  double acc = 0.0;
  size_t n = 0;
  for (const auto& ch : block) {
    for (float v : ch) acc += static_cast<double>(v) * v;
    n += ch.size();
  }
  return acc / static_cast<double>(n);
}

}  // namespace

std::vector<uint8_t> pack_mask(const Tensor<float>& mask) {
  std::vector<uint8_t> bits((mask.numel() + 7) / 8, 0);
  for (size_t i = 0; i < mask.numel(); ++i)
    if (mask[i] > 0.5f) bits[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  return bits;
}

Tensor<float> unpack_mask(const std::vector<uint8_t>& bits, int size) {
  Tensor<float> mask({size, size});
  for (size_t i = 0; i < mask.numel(); ++i)
    mask[i] = (bits[i / 8] >> (i % 8)) & 1u ? 1.0f : 0.0f;
  return mask;
}

IngestCounts preprocess_dataset(const DatasetManifest& manifest,
                                TeacherProvider& teacher,
                                const IngestConfig& cfg,
                                const std::string& out_dir) {
  PF_CHECK_CFG(cfg.window_s > 0 && cfg.target_size > 0, "ingest: bad config");

  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "img", ec);
  fs::create_directories(fs::path(out_dir) / "mask", ec);
  if (ec) throw IoError("ingest: cannot create " + out_dir);

  const std::string wav_path =
      (fs::path(manifest.root) / manifest.audio_file).string();

  std::vector<double> frame_times;
  frame_times.reserve(manifest.frames.size());
  for (const auto& f : manifest.frames) frame_times.push_back(f.t);
  PF_CHECK_CFG(!frame_times.empty(), "ingest: manifest has no frames");

  IngestCounts counts;
  const double tol = 0.5 / manifest.config.frame_rate;

  // Pass 1: window energies and frame pairing.
  std::vector<Candidate> cands;
  {
    WavStreamReader reader(wav_path);
    const size_t win = static_cast<size_t>(
        std::llround(cfg.window_s * reader.sample_rate()));
    std::vector<std::vector<float>> block;
    for (size_t k = 0;; ++k) {
      if (reader.read(win, block) < win) break;
      ++counts.windows;
      Candidate c;
      c.window = k;
      c.t_start = static_cast<double>(k * win) / reader.sample_rate();
      c.t_center = c.t_start + cfg.window_s / 2.0;
      const auto it = std::min_element(
          frame_times.begin(), frame_times.end(),
          [&](double a, double b) {
            return std::abs(a - c.t_center) < std::abs(b - c.t_center);
          });
      c.frame_index = static_cast<size_t>(it - frame_times.begin());
      if (std::abs(*it - c.t_center) > tol + 1e-9) {
        ++counts.dropped_no_frame;
        continue;
      }
      c.energy = energy_of_block(block);
      cands.push_back(c);
    }
  }

  // Split, then fit the energy threshold on the training pool only.
  auto [train_idx, val_idx] =
      split_indices(cands.size(), cfg.train_frac, cfg.seed);
  for (size_t i : val_idx) cands[i].split = 1;

  std::vector<double> train_energies;
  train_energies.reserve(train_idx.size());
  for (size_t i : train_idx) train_energies.push_back(cands[i].energy);
  const double threshold = mean_energy(train_energies);

  for (auto& c : cands) {
    const bool apply = (c.split == 0) ? cfg.filter_train : cfg.filter_val;
    if (apply && c.energy < threshold) {
      c.kept = false;
      ++counts.dropped_low_energy;
    }
  }

  // Pass 2: spectrograms, labels and imagery for the survivors.
  ordered_json samples_json = ordered_json::array();
  {
    WavStreamReader reader(wav_path);
    const size_t win = static_cast<size_t>(
        std::llround(cfg.window_s * reader.sample_rate()));
    std::ofstream mel_out(fs::path(out_dir) / "mel.bin", std::ios::binary);
    if (!mel_out) throw IoError("ingest: cannot create mel.bin");

    std::vector<std::vector<float>> block;
    size_t next_cand = 0;
    for (size_t k = 0;; ++k) {
      if (reader.read(win, block) < win) break;
      while (next_cand < cands.size() && cands[next_cand].window < k)
        ++next_cand;
      if (next_cand >= cands.size()) break;
      const Candidate& c = cands[next_cand];
      if (c.window != k || !c.kept) continue;

      const std::string id = sample_name(c.window);
      TeacherContext ctx;
      ctx.sample_id = id;
      ctx.dataset_root = manifest.root;
      ctx.frame_index = c.frame_index;
      ctx.frame = &manifest.frames[c.frame_index];
      ctx.target_size = cfg.target_size;

      const auto box = teacher.pseudo_box3d(ctx);
      if (!box) {
        ++counts.dropped_no_box;
        continue;
      }
      const double d = teacher.pseudo_detect2d(ctx);
      const Tensor<float> mask = teacher.pseudo_segmask(ctx);

      MelParams mp = cfg.mel;
      mp.sample_rate = reader.sample_rate();
      const Tensor<float> mel = mel_spectrogram(block, mp);
      const size_t offset = append_mel_record(mel_out, mel);

      const FrameRecord& frame = manifest.frames[c.frame_index];
      const Image8 native =
          read_png((fs::path(manifest.root) / frame.image).string());
      const Tensor<float> resized = resize_bilinear(
          image_to_tensor(native), cfg.target_size, cfg.target_size);
      const std::string img_rel = "img/" + id + ".png";
      const std::string mask_rel = "mask/" + id + ".png";
      write_png((fs::path(out_dir) / img_rel).string(),
                tensor_to_image(resized));
      Image8 mask_img;
      mask_img.width = cfg.target_size;
      mask_img.height = cfg.target_size;
      mask_img.channels = 1;
      mask_img.pixels.resize(mask.numel());
      for (size_t i = 0; i < mask.numel(); ++i)
        mask_img.pixels[i] = mask[i] > 0.5f ? 255 : 0;
      write_png((fs::path(out_dir) / mask_rel).string(), mask_img);

      const auto y = box->to_array();
      samples_json.push_back(
          {{"id", id},
           {"t_start", c.t_start},
           {"t_center", c.t_center},
           {"frame", c.frame_index},
           {"split", c.split == 0 ? "train" : "val"},
           {"energy", c.energy},
           {"mel", {{"offset", offset},
                    {"shape", {mel.dim(0), mel.dim(1), mel.dim(2)}}}},
           {"image", img_rel},
           {"mask", mask_rel},
           {"box", y},
           {"d", d},
           {"in_fov", frame.in_fov}});
      if (c.split == 0)
        ++counts.train;
      else
        ++counts.val;
    }
  }

  ordered_json j;
  j["version"] = 1;
  j["window_s"] = cfg.window_s;
  j["mel"] = {{"sample_rate", cfg.mel.sample_rate},
              {"n_mels", cfg.mel.n_mels},
              {"window", cfg.mel.window},
              {"hop", cfg.mel.hop}};
  j["target_size"] = cfg.target_size;
  j["train_frac"] = cfg.train_frac;
  j["seed"] = cfg.seed;
  j["energy_threshold"] = threshold;
  j["filter"] = {{"train", cfg.filter_train}, {"val", cfg.filter_val}};
  j["counts"] = {{"windows", counts.windows},
                 {"dropped_no_frame", counts.dropped_no_frame},
                 {"dropped_low_energy", counts.dropped_low_energy},
                 {"dropped_no_box", counts.dropped_no_box},
                 {"train", counts.train},
                 {"val", counts.val}};
  j["source"] = {{"root", manifest.root}, {"seed", manifest.seed}};
  j["samples"] = std::move(samples_json);

  std::ofstream out(fs::path(out_dir) / "index.json", std::ios::binary);
  if (!out) throw IoError("ingest: cannot write index.json");
  out << j.dump(2) << "\n";
  return counts;
}

SampleStore SampleStore::load(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "index.json", std::ios::binary);
  if (!in) throw IoError("store: cannot open index.json in " + dir);
  ordered_json j;
  in >> j;

  SampleStore store;
  store.config.window_s = j.value("window_s", kSegmentWindowS);
  store.config.target_size = j.value("target_size", 256);
  store.config.train_frac = j.value("train_frac", 0.8);
  store.config.seed = j.value("seed", 0ULL);
  if (j.contains("mel")) {
    store.config.mel.sample_rate = j["mel"].value("sample_rate", 48000);
    store.config.mel.n_mels = j["mel"].value("n_mels", 128);
    store.config.mel.window = j["mel"].value("window", 2048);
    store.config.mel.hop = j["mel"].value("hop", 1024);
  }
  store.energy_threshold = j.value("energy_threshold", 0.0);
  if (j.contains("filter")) {
    store.config.filter_train = j["filter"].value("train", true);
    store.config.filter_val = j["filter"].value("val", true);
  }
  if (j.contains("counts")) {
    const auto& c = j["counts"];
    store.counts.windows = c.value("windows", 0ULL);
    store.counts.dropped_no_frame = c.value("dropped_no_frame", 0ULL);
    store.counts.dropped_low_energy = c.value("dropped_low_energy", 0ULL);
    store.counts.dropped_no_box = c.value("dropped_no_box", 0ULL);
    store.counts.train = c.value("train", 0ULL);
    store.counts.val = c.value("val", 0ULL);
  }
  if (j.contains("source")) store.source_root = j["source"].value("root", "");

  std::ifstream mel_in(fs::path(dir) / "mel.bin", std::ios::binary);
  if (!mel_in) throw IoError("store: cannot open mel.bin in " + dir);

  for (const auto& rec : j.at("samples")) {
    StoreSample s;
    s.id = rec.at("id").get<std::string>();
    s.t_start = rec.at("t_start").get<double>();
    s.t_center = rec.at("t_center").get<double>();
    s.frame_index = rec.at("frame").get<size_t>();
    s.split = rec.at("split").get<std::string>() == "train" ? 0 : 1;
    s.energy = rec.at("energy").get<double>();
    s.mel = read_mel_record(mel_in, rec.at("mel").at("offset").get<size_t>());
    const Image8 img = read_png((fs::path(dir) / rec.at("image").get<std::string>()).string());
    PF_CHECK_MSG(img.channels == 3, "store: image must be RGB");
    s.image = img;
    const Image8 mask_img = read_png((fs::path(dir) / rec.at("mask").get<std::string>()).string());
    Tensor<float> mask({mask_img.height, mask_img.width});
    for (size_t i = 0; i < mask.numel(); ++i)
      mask[i] = mask_img.pixels[i] > 127 ? 1.0f : 0.0f;
    s.mask_bits = pack_mask(mask);
    const auto& b = rec.at("box");
    for (int i = 0; i < 7; ++i) s.box[static_cast<size_t>(i)] = b.at(i).get<double>();
    s.d = rec.at("d").get<double>();
    s.in_fov = rec.at("in_fov").get<bool>();
    store.samples.push_back(std::move(s));
  }
  return store;
}

std::vector<size_t> SampleStore::split_of(int split) const {
  std::vector<size_t> idx;
  for (size_t i = 0; i < samples.size(); ++i)
    if (samples[i].split == split) idx.push_back(i);
  return idx;
}

Tensor<float> store_mel_input(const StoreSample& s, int target_size) {
  return resize_bilinear(s.mel, target_size, target_size);
}

Tensor<float> store_image_input(const StoreSample& s, int target_size) {
  Tensor<float> img = image_to_tensor(s.image);
  if (target_size > 0 && (s.image.height != target_size ||
                          s.image.width != target_size))
    img = resize_bilinear(img, target_size, target_size);
  return img;
}

Tensor<float> store_mask_target(const StoreSample& s, int target_size) {
  const int stored = s.image.height;  // mask is aligned with the image
  Tensor<float> mask = unpack_mask(s.mask_bits, stored);
  if (stored != target_size)
    mask = resize_nearest_plane(mask, target_size, target_size);
  return mask;
}

}  // namespace pedfuse
