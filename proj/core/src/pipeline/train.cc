// core/src/pipeline/train.cc

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

#include "pedfuse/pipeline/train.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "pedfuse/eval/metrics.h"
#include "pedfuse/image.h"
#include "pedfuse/model/checkpoint.h"
#include "pedfuse/nn/adam.h"
#include "pedfuse/nn/graph.h"
#include "pedfuse/pipeline/losses.h"
#include "pedfuse/rng.h"

namespace pedfuse {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string train_config_to_json(const TrainConfig& c) {
  ordered_json j;
  j["lr"] = c.lr;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["seed"] = c.seed;
  j["aug_brightness"] = c.aug_brightness;
  j["num_threads"] = c.num_threads;
  j["validate_every_epoch"] = c.validate_every_epoch;
  j["out_dir"] = c.out_dir;
  return j.dump(2);
}

TrainConfig train_config_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  TrainConfig c;
  c.lr = j.value("lr", c.lr);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.epochs = j.value("epochs", c.epochs);
  c.lambda1 = j.value("lambda1", c.lambda1);
  c.lambda2 = j.value("lambda2", c.lambda2);
  c.seed = j.value("seed", c.seed);
  if (j.contains("aug_brightness")) {
    c.aug_brightness[0] = j["aug_brightness"].at(0).get<double>();
    c.aug_brightness[1] = j["aug_brightness"].at(1).get<double>();
  }
  c.num_threads = j.value("num_threads", c.num_threads);
  c.validate_every_epoch = j.value("validate_every_epoch", c.validate_every_epoch);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.validate();
  return c;
}

std::string TrainLog::to_jsonl() const {
  std::string out;
  for (const auto& e : epochs) {
    ordered_json j;
    j["epoch"] = e.epoch;
    j["loss_r"] = e.loss_r;
    j["loss_d"] = e.loss_d;
    j["loss_s"] = e.loss_s;
    j["loss_t"] = e.loss_t;
    j["val"] = {{"ap_ave", e.val_ap_ave},
                {"ap_0.3", e.val_ap03},
                {"dx", e.val_dx},
                {"dy", e.val_dy}};
    j["steps"] = e.steps;
    j["seconds"] = e.seconds;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

struct SampleLosses {
  double l_r = 0, l_d = 0, l_s = 0, l_t = 0;
};

// One sample's contribution: builds the graph, runs backward, returns the
// component losses. Gradients stay on the graph for the ordered reduction.
struct SampleWork {
  nn::Graph<float> graph;
  PedFuseNet<float>::Forward fwd;
  SampleLosses losses;
};

void run_sample(const PedFuseNet<float>& net, const StoreSample& sample,
                double brightness, const TrainConfig& cfg, SampleWork& work) {
  const ModelConfig& mc = net.config();
  const int s = mc.input_size;
  Tensor<float> mel = store_mel_input(sample, s);
  Tensor<float> image =
      brightness_scale(store_image_input(sample, s), brightness);

  PedFuseNet<float>::BuildOptions opt;
  opt.with_segmentation = mc.use_segmentation;
  work.fwd = net.build(work.graph, mel, image, opt);

  auto& g = work.graph;
  Tensor<float> box_target({7});
  for (int i = 0; i < 7; ++i)
    box_target[i] = static_cast<float>(sample.box[static_cast<size_t>(i)]);
  const int l_r = nn::mse_box_loss(g, work.fwd.box, box_target);

  std::vector<int> terms{l_r};
  std::vector<float> weights{1.0f};
  int l_d = -1, l_s = -1;
  if (mc.use_attention) {
    l_d = nn::bce_scalar_loss(g, work.fwd.dhat,
                              static_cast<float>(sample.d));
    terms.push_back(l_d);
    weights.push_back(static_cast<float>(cfg.lambda1));
  }
  if (mc.use_segmentation) {
    const Tensor<float> mask = store_mask_target(sample, s);
    const int p1 = nn::slice_channel(g, work.fwd.seg, 1);
    l_s = nn::bce_map_loss(g, p1, mask);
    terms.push_back(l_s);
    weights.push_back(static_cast<float>(cfg.lambda2));
  }
  const int l_t = nn::weighted_sum(g, terms, weights);

  work.losses.l_r = g.value(l_r)[0];
  work.losses.l_d = l_d >= 0 ? g.value(l_d)[0] : 0.0;
  work.losses.l_s = l_s >= 0 ? g.value(l_s)[0] : 0.0;
  work.losses.l_t = g.value(l_t)[0];
  g.backward(l_t);
}

void accumulate(const PedFuseNet<float>& net, SampleWork& work,
                std::vector<Tensor<float>>& grads, float scale) {
  const auto& store = net.params();
  for (size_t i = 0; i < store.size(); ++i) {
    if (!store[i].trainable) continue;
    const int leaf = work.fwd.param_leaf[i];
    if (!work.graph.has_grad(leaf)) continue;
    const auto& g = work.graph.grad(leaf);
    auto& dst = grads[i];
    for (size_t j = 0; j < g.numel(); ++j) dst[j] += scale * g[j];
  }
}

void dump_diagnostics(const TrainConfig& cfg, int epoch, int step,
                      const SampleLosses& losses,
                      const ParamStore<float>& store) {
  if (cfg.out_dir.empty()) return;
  ordered_json j;
  j["reason"] = "non-finite loss";
  j["epoch"] = epoch;
  j["step"] = step;
  j["loss_r"] = losses.l_r;
  j["loss_d"] = losses.l_d;
  j["loss_s"] = losses.l_s;
  j["loss_t"] = losses.l_t;
  ordered_json norms;
  for (size_t i = 0; i < store.size(); ++i) {
    double acc = 0;
    for (size_t k = 0; k < store[i].value.numel(); ++k)
      acc += static_cast<double>(store[i].value[k]) * store[i].value[k];
    norms[store[i].name] = std::sqrt(acc);
  }
  j["param_norms"] = norms;
  std::ofstream out(fs::path(cfg.out_dir) / "diagnostic_dump.json");
  out << j.dump(2) << "\n";
}

}  // namespace

TrainResult train_on(PedFuseNet<float>& net, const SampleStore& store,
                     const std::vector<size_t>& train_idx,
                     const std::vector<size_t>& val_idx,
                     const TrainConfig& cfg) {
  cfg.validate();
  PF_CHECK_CFG(!train_idx.empty(), "train: empty training set");
  if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);

  nn::Adam<float> adam(static_cast<float>(cfg.lr));
  std::vector<Tensor<float>> grads(net.params().size());
  for (size_t i = 0; i < grads.size(); ++i)
    grads[i] = Tensor<float>(net.params()[i].value.shape());

  TrainResult result;
  const std::string ckpt_path =
      cfg.out_dir.empty() ? "best.ckpt"
                          : (fs::path(cfg.out_dir) / "best.ckpt").string();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<size_t> order = train_idx;
    Rng shuffle_rng(derive_seed(cfg.seed, "shuffle", static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    EpochLog log;
    log.epoch = epoch;
    size_t seen = 0;

    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t bsz =
          std::min<size_t>(cfg.batch_size, order.size() - start);
      for (auto& t : grads)
        std::fill(t.data(), t.data() + t.numel(), 0.0f);

      std::vector<SampleLosses> losses(bsz);
      const float scale = 1.0f / static_cast<float>(bsz);
      const int n_threads =
          std::max(1, std::min<int>(cfg.num_threads, static_cast<int>(bsz)));

      // Workers run samples independently; the reduction happens strictly
      // in slot order behind a turnstile so any thread count produces the
      // identical float sum.
      std::mutex mu;
      std::condition_variable cv;
      size_t turn = 0;
      std::atomic<bool> failed{false};
      auto worker = [&](int tid) {
        for (size_t slot = static_cast<size_t>(tid); slot < bsz;
             slot += static_cast<size_t>(n_threads)) {
          if (failed.load()) return;
          const StoreSample& sample = store.samples[order[start + slot]];
          const uint64_t aug_key =
              (static_cast<uint64_t>(epoch) << 32) ^ (start + slot);
          Rng aug_rng(derive_seed(cfg.seed, "brightness-aug", aug_key));
          const double brightness =
              aug_rng.uniform(cfg.aug_brightness[0], cfg.aug_brightness[1]);

          SampleWork work;
          bool ok = true;
          try {
            run_sample(net, sample, brightness, cfg, work);
          } catch (...) {
            ok = false;
          }
          std::unique_lock<std::mutex> lock(mu);
          cv.wait(lock, [&] { return turn == slot || failed.load(); });
          if (failed.load()) return;
          if (!ok) {
            failed.store(true);
            cv.notify_all();
            return;
          }
          losses[slot] = work.losses;
          accumulate(net, work, grads, scale);
          ++turn;
          cv.notify_all();
        }
      };
      if (n_threads == 1) {
        worker(0);
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
      }
      if (failed.load())
        throw std::runtime_error("train: sample evaluation failed");

      double batch_t = 0;
      for (size_t i = 0; i < bsz; ++i) {
        log.loss_r += losses[i].l_r;
        log.loss_d += losses[i].l_d;
        log.loss_s += losses[i].l_s;
        log.loss_t += losses[i].l_t;
        batch_t += losses[i].l_t;
      }
      if (!std::isfinite(batch_t)) {
        dump_diagnostics(cfg, epoch, log.steps, losses[0], net.params());
        throw std::runtime_error(
            "train: non-finite loss; diagnostic state dumped");
      }
      seen += bsz;
      ++log.steps;
      adam.step(net.params(), grads);
    }

    log.loss_r /= static_cast<double>(seen);
    log.loss_d /= static_cast<double>(seen);
    log.loss_s /= static_cast<double>(seen);
    log.loss_t /= static_cast<double>(seen);

    if (cfg.validate_every_epoch && !val_idx.empty()) {
      const EvalReport r =
          evaluate(net, store, val_idx, EvalCondition{}, "train-val");
      log.val_ap_ave = r.ap_ave;
      log.val_ap03 = r.ap_03;
      log.val_dx = r.dx;
      log.val_dy = r.dy;
      if (result.best_epoch < 0 || r.ap_ave > result.best_ap_ave) {
        result.best_epoch = epoch;
        result.best_ap_ave = r.ap_ave;
        save_checkpoint(net, ckpt_path);
        result.checkpoint_path = ckpt_path;
      }
    }

    log.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    result.log.epochs.push_back(log);
  }

  if (result.best_epoch < 0) {  // no validation pass ran
    save_checkpoint(net, ckpt_path);
    result.checkpoint_path = ckpt_path;
    result.best_epoch = cfg.epochs - 1;
  }
  if (!cfg.out_dir.empty()) {
    std::ofstream out(fs::path(cfg.out_dir) / "train_log.jsonl");
    out << result.log.to_jsonl();
  }
  return result;
}

TrainResult train(PedFuseNet<float>& net, const SampleStore& store,
                  const TrainConfig& cfg) {
  return train_on(net, store, store.split_of(0), store.split_of(1), cfg);
}

InferResult infer(const PedFuseNet<float>& net, const AudioSegment& segment,
                  const Tensor<float>& image, const MelParams& mel_params) {
  const int s = net.config().input_size;
  MelParams mp = mel_params;
  mp.sample_rate = segment.sample_rate;
  const Tensor<float> mel =
      resize_bilinear(mel_spectrogram(segment.samples, mp), s, s);
  Tensor<float> img = image;
  if (image.dim(1) != s || image.dim(2) != s)
    img = resize_bilinear(image, s, s);

  const auto out = net.forward(mel, img, /*with_segmentation=*/false);
  InferResult r;
  r.box.center = {out.box[0], out.box[1], out.box[2]};
  r.box.size = {out.box[3], out.box[4], out.box[5]};
  r.box.yaw = out.box[6];
  r.dhat = net.config().use_attention ? out.dhat : 1.0;
  return r;
}

}  // namespace pedfuse
