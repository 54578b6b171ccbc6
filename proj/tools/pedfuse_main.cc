// tools/pedfuse_main.cc

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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "pedfuse/eval/bev.h"
#include "pedfuse/eval/metrics.h"
#include "pedfuse/image.h"
#include "pedfuse/ingest/store.h"
#include "pedfuse/model/checkpoint.h"
#include "pedfuse/pipeline/train.h"
#include "pedfuse/sim/dataset.h"
#include "pedfuse/teacher/teacher.h"

namespace fs = std::filesystem;
using namespace pedfuse;

namespace {

// Top-level config file: {"scene": {...}, "model": {...}, "train": {...},
// "ingest": {...}} — every section optional, fields default as in code.
struct FileConfig {
  SceneConfig scene;
  ModelConfig model;
  TrainConfig train;
  IngestConfig ingest;
};

FileConfig load_config(const std::string& path) {
  FileConfig c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("scene")) c.scene = scene_config_from_json(j["scene"].dump());
  if (j.contains("model")) c.model = model_config_from_json(j["model"].dump());
  if (j.contains("train")) c.train = train_config_from_json(j["train"].dump());
  if (j.contains("ingest")) {
    const auto& g = j["ingest"];
    c.ingest.window_s = g.value("window_s", c.ingest.window_s);
    c.ingest.target_size = g.value("target_size", c.ingest.target_size);
    c.ingest.train_frac = g.value("train_frac", c.ingest.train_frac);
    c.ingest.filter_train = g.value("filter_train", c.ingest.filter_train);
    c.ingest.filter_val = g.value("filter_val", c.ingest.filter_val);
    if (g.contains("mel")) {
      c.ingest.mel.n_mels = g["mel"].value("n_mels", c.ingest.mel.n_mels);
      c.ingest.mel.window = g["mel"].value("window", c.ingest.mel.window);
      c.ingest.mel.hop = g["mel"].value("hop", c.ingest.mel.hop);
    }
  }
  return c;
}

int cmd_simulate(const std::string& config, double duration, uint64_t seed,
                 const std::string& out) {
  FileConfig fc = load_config(config);
  fc.scene.seed = seed;
  const DatasetManifest m = generate_dataset(fc.scene, duration, out);
  std::cout << "dataset: " << out << "\n"
            << "frames: " << m.frames.size() << "\n"
            << "steps: " << m.synth_stats.steps
            << " (clamped distances: " << m.synth_stats.clamped_distances
            << ")\n";
  return 0;
}

int cmd_preprocess(const std::string& config, const std::string& data,
                   uint64_t seed, const std::string& out,
                   const std::string& labels) {
  FileConfig fc = load_config(config);
  fc.ingest.seed = seed;
  const DatasetManifest manifest = load_manifest(data);

  std::unique_ptr<TeacherProvider> teacher;
  if (labels.empty())
    teacher = std::make_unique<OracleTeacher>(manifest);
  else
    teacher = std::make_unique<FileLabelTeacher>(labels);

  const IngestCounts counts =
      preprocess_dataset(manifest, *teacher, fc.ingest, out);
  std::cout << "store: " << out << "\n"
            << "windows: " << counts.windows
            << "  train: " << counts.train << "  val: " << counts.val << "\n"
            << "dropped: no-frame " << counts.dropped_no_frame
            << ", low-energy " << counts.dropped_low_energy << ", no-box "
            << counts.dropped_no_box << "\n";
  return 0;
}

int cmd_train(const std::string& config, const std::string& store_dir,
              uint64_t seed, const std::string& out, int epochs,
              bool no_attention, bool no_segmentation,
              const std::string& gating, bool zero_audio, int threads) {
  FileConfig fc = load_config(config);
  fc.train.seed = seed;
  fc.train.out_dir = out;
  if (epochs > 0) fc.train.epochs = epochs;
  if (threads > 0) fc.train.num_threads = threads;
  if (no_attention) fc.model.use_attention = false;
  if (no_segmentation) fc.model.use_segmentation = false;
  if (!gating.empty()) fc.model.gating = gating_mode_from_name(gating);
  if (zero_audio) fc.model.zero_audio = true;
  fc.model.init_seed = seed;

  const SampleStore store = SampleStore::load(store_dir);
  PedFuseNet<float> net(fc.model);
  const TrainResult r = train(net, store, fc.train);
  std::cout << "checkpoint: " << r.checkpoint_path << " (best epoch "
            << r.best_epoch << ", AP@Ave " << r.best_ap_ave << ")\n";
  if (!r.log.epochs.empty()) {
    const auto& last = r.log.epochs.back();
    std::cout << "final losses: r " << last.loss_r << " d " << last.loss_d
              << " s " << last.loss_s << " t " << last.loss_t << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& store_dir, const std::string& ckpt,
             const std::string& out, bool dark, const std::string& fov) {
  const SampleStore store = SampleStore::load(store_dir);
  const PedFuseNet<float> net = load_checkpoint(ckpt);

  EvalCondition cond;
  cond.dark = dark;
  if (fov == "in")
    cond.fov = FovFilter::kIn;
  else if (fov == "out")
    cond.fov = FovFilter::kOut;
  else if (fov != "all")
    throw ConfigError("--fov must be one of in|out|all");

  const auto val = store.split_of(1);
  const EvalReport report = evaluate(net, store, val, cond, "pedfuse");
  const std::string table = report_table({report});
  std::cout << table;
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream jt(fs::path(out) / "report.json");
    jt << report_json({report}) << "\n";
    std::ofstream tt(fs::path(out) / "report.txt");
    tt << table;
    std::cout << "written: " << out << "/report.{json,txt}\n";
  }
  return 0;
}

int cmd_infer(const std::string& ckpt, const std::string& wav,
              const std::string& image_path, double t) {
  const PedFuseNet<float> net = load_checkpoint(ckpt);
  const AudioBuffer audio = read_wav_s16le(wav);
  PF_CHECK_CFG(audio.num_channels() == net.config().mel_channels,
               "infer: channel count mismatch");

  // Cut the 0.4 s window whose center is nearest t.
  const size_t win = static_cast<size_t>(
      std::llround(kSegmentWindowS * audio.sample_rate));
  PF_CHECK_CFG(audio.num_samples() >= win, "infer: stream shorter than one window");
  const size_t max_start = audio.num_samples() - win;
  double start_s = t - kSegmentWindowS / 2;
  size_t start = start_s <= 0 ? 0
                              : std::min(max_start,
                                         static_cast<size_t>(start_s *
                                                             audio.sample_rate));
  AudioSegment seg;
  seg.sample_rate = audio.sample_rate;
  seg.t_start = static_cast<double>(start) / audio.sample_rate;
  seg.t_center = seg.t_start + kSegmentWindowS / 2;
  for (const auto& ch : audio.channels)
    seg.samples.emplace_back(ch.begin() + start, ch.begin() + start + win);

  const Tensor<float> image = image_to_tensor(read_png(image_path));
  const InferResult r = infer(net, seg, image, MelParams{});

  nlohmann::ordered_json j;
  j["box3d"] = {{"center", {r.box.center.x, r.box.center.y, r.box.center.z}},
                {"size", {r.box.size.x, r.box.size.y, r.box.size.z}},
                {"yaw", r.box.yaw}};
  j["dhat"] = r.dhat;
  j["t_center"] = seg.t_center;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_viz(const std::string& store_dir, const std::string& ckpt,
            const std::string& sample_id, const std::string& out,
            const std::string& config) {
  const SampleStore store = SampleStore::load(store_dir);
  const PedFuseNet<float> net = load_checkpoint(ckpt);

  const StoreSample* sample = nullptr;
  for (const auto& s : store.samples)
    if (s.id == sample_id) sample = &s;
  if (!sample) throw ConfigError("viz: unknown sample id " + sample_id);

  const int sz = net.config().input_size;
  const auto pred = net.forward(store_mel_input(*sample, sz),
                                store_image_input(*sample, sz));
  Box3D pred_box;
  pred_box.center = {pred.box[0], pred.box[1], pred.box[2]};
  pred_box.size = {pred.box[3], pred.box[4], pred.box[5]};
  pred_box.yaw = pred.box[6];
  const Box3D gt = Box3D::from_array(
      {sample->box[0], sample->box[1], sample->box[2], sample->box[3],
       sample->box[4], sample->box[5], sample->box[6]});

  FileConfig fc = load_config(config);
  visualize_bev(BevContext::from_scene(fc.scene), gt, pred_box, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audio-visual 3D pedestrian localization pipeline"};
  app.require_subcommand(1);

  std::string config, out, data, store_dir, ckpt, wav, image, labels;
  std::string gating, fov = "all", sample_id;
  double duration = 300.0, t = 0.2;
  uint64_t seed = 7;
  int epochs = 0, threads = 0;
  bool dark = false, no_attention = false, no_segmentation = false;
  bool zero_audio = false;

  auto* sim = app.add_subcommand("simulate", "generate a synthetic scene dataset");
  sim->add_option("--config", config, "config file (JSON)");
  sim->add_option("--duration", duration, "seconds of data")->required();
  sim->add_option("--seed", seed, "master seed");
  sim->add_option("--out", out, "output dataset directory")->required();

  auto* prep = app.add_subcommand("preprocess", "build the training sample store");
  prep->add_option("--config", config, "config file (JSON)");
  prep->add_option("--data", data, "dataset directory (manifest.json)")->required();
  prep->add_option("--seed", seed, "split seed");
  prep->add_option("--out", out, "output store directory")->required();
  prep->add_option("--labels", labels,
                   "external teacher label file (default: simulator oracle)");

  auto* tr = app.add_subcommand("train", "train the audio-visual student");
  tr->add_option("--config", config, "config file (JSON)");
  tr->add_option("--store", store_dir, "sample store directory")->required();
  tr->add_option("--seed", seed, "training seed");
  tr->add_option("--out", out, "run directory (checkpoints, logs)")->required();
  tr->add_option("--epochs", epochs, "override epoch count");
  tr->add_option("--threads", threads, "worker threads per batch");
  tr->add_flag("--no-attention", no_attention, "disable the attention gate and L_d");
  tr->add_flag("--no-segmentation", no_segmentation, "disable the decoder and L_s");
  tr->add_option("--gating", gating, "gate mode: literal | visual-only");
  tr->add_flag("--zero-audio", zero_audio, "zero the spectrogram input (visual-only baseline)");

  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on the val split");
  ev->add_option("--store", store_dir, "sample store directory")->required();
  ev->add_option("--checkpoint", ckpt, "checkpoint file")->required();
  ev->add_option("--out", out, "report output directory");
  ev->add_flag("--dark", dark, "brightness-0 images");
  ev->add_option("--fov", fov, "in | out | all");

  auto* in = app.add_subcommand("infer", "single-sample inference");
  in->add_option("--checkpoint", ckpt, "checkpoint file")->required();
  in->add_option("--wav", wav, "4-channel S16LE WAV")->required();
  in->add_option("--image", image, "camera frame PNG")->required();
  in->add_option("--t", t, "segment center time, seconds");

  auto* vz = app.add_subcommand("viz", "top-down box visualization");
  vz->add_option("--store", store_dir, "sample store directory")->required();
  vz->add_option("--checkpoint", ckpt, "checkpoint file")->required();
  vz->add_option("--sample", sample_id, "sample id (e.g. s000042)")->required();
  vz->add_option("--out", out, "output PNG path")->required();
  vz->add_option("--config", config, "config file for the scene geometry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors
  }

  try {
    if (sim->parsed()) return cmd_simulate(config, duration, seed, out);
    if (prep->parsed()) return cmd_preprocess(config, data, seed, out, labels);
    if (tr->parsed())
      return cmd_train(config, store_dir, seed, out, epochs, no_attention,
                       no_segmentation, gating, zero_audio, threads);
    if (ev->parsed()) return cmd_eval(store_dir, ckpt, out, dark, fov);
    if (in->parsed()) return cmd_infer(ckpt, wav, image, t);
    if (vz->parsed()) return cmd_viz(store_dir, ckpt, sample_id, out, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
