// tests/acceptance_main.cc

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

// End-to-end acceptance harness. Each criterion prints one PASS/FAIL line;
// the binary exits non-zero if any criterion fails. Later criteria reuse the
// dataset and trained models produced by earlier ones.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "pedfuse/eval/bev.h"
#include "pedfuse/eval/metrics.h"
#include "pedfuse/image.h"
#include "pedfuse/ingest/store.h"
#include "pedfuse/model/checkpoint.h"
#include "pedfuse/nn/graph.h"
#include "pedfuse/pipeline/losses.h"
#include "pedfuse/pipeline/train.h"
#include "pedfuse/rng.h"
#include "pedfuse/sim/dataset.h"
#include "pedfuse/teacher/teacher.h"

using namespace pedfuse;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<Outcome> g_outcomes;

void record(const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  g_outcomes.push_back({name, pass, detail, seconds});
  std::printf("[%s] %-28s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
}

struct Shared {
  std::string work = "acceptance_work";
  std::string data_dir, store_dir, av_run, vo_run;
  SceneConfig scene;
  bool have_store = false;
  bool have_av = false;
};

// ---------------------------------------------------------------------------
// 1. Loss identities (exact).
void criterion_losses() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string why;

  std::array<double, 7> y{1.0, -0.5, 0.85, 0.5, 0.5, 1.7, 0.3};
  if (loss_regression(y, y) != 0.0) { ok = false; why += "L_r(Y,Y)!=0 "; }

  if (std::abs(loss_detection(1.0, 0.5) - std::log(2.0)) > 1e-9) {
    ok = false;
    why += "L_d(1,0.5)!=ln2 ";
  }

  Tensor<float> mask({64, 64});
  Rng rng(1);
  for (size_t i = 0; i < mask.numel(); ++i)
    mask[i] = rng.uniform() < 0.5 ? 1.0f : 0.0f;
  const Tensor<float> half = Tensor<float>::full({64, 64}, 0.5f);
  if (std::abs(loss_segmentation(mask, half) - std::log(2.0)) > 1e-9) {
    ok = false;
    why += "L_s(uniform 0.5)!=ln2 ";
  }

  if (loss_total(1.0, 1.0, 1.0, 0.3, 0.3) != 1.6) {
    ok = false;
    why += "L_t(1,1,1)!=1.6 ";
  }

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("loss-identities", ok, ok ? "all four identities exact" : why, secs);
}

// ---------------------------------------------------------------------------
// 2. Gradient verification against central finite differences (double).
void criterion_gradients() {
  const auto t0 = Clock::now();
  ModelConfig cfg;  // full default dimensions
  PedFuseNet<double> net(cfg);

  // Move off the freshly initialized point: zero biases park entire ReLU
  // planes exactly on their kink (zero inputs x zero bias), where central
  // differences measure the two-sided average instead of the subgradient.
  // A generic parameter point keeps the comparison well defined.
  {
    Rng jitter(4711);
    for (size_t i = 0; i < net.params().size(); ++i) {
      auto& t = net.params()[i].value;
      for (size_t j = 0; j < t.numel(); ++j) t[j] += jitter.uniform(-0.01, 0.01);
    }
  }

  Rng rng(20240809);
  Tensor<double> mel({4, 256, 256});
  for (size_t i = 0; i < mel.numel(); ++i) mel[i] = rng.uniform(0.0, 8.0);
  Tensor<double> image({3, 256, 256});
  for (size_t i = 0; i < image.numel(); ++i) image[i] = rng.uniform();
  Tensor<double> box_target({7});
  const double targets[7] = {1.2, -0.4, 0.85, 0.5, 0.5, 1.7, 0.8};
  for (int i = 0; i < 7; ++i) box_target[i] = targets[i];
  Tensor<double> mask({256, 256});
  for (size_t i = 0; i < mask.numel(); ++i)
    mask[i] = rng.uniform() < 0.3 ? 1.0 : 0.0;

  auto loss_of = [&](nn::Graph<double>& g,
                     PedFuseNet<double>::Forward* fwd_out) {
    PedFuseNet<double>::BuildOptions opt;
    const auto f = net.build(g, mel, image, opt);
    const int lr_ = nn::mse_box_loss(g, f.box, box_target);
    const int ld = nn::bce_scalar_loss(g, f.dhat, 1.0);
    const int p1 = nn::slice_channel(g, f.seg, 1);
    const int ls = nn::bce_map_loss(g, p1, mask);
    const int lt = nn::weighted_sum(g, {lr_, ld, ls}, {1.0, 0.3, 0.3});
    if (fwd_out) *fwd_out = f;
    return lt;
  };

  // Analytic gradients.
  nn::Graph<double> g;
  PedFuseNet<double>::Forward fwd;
  const int lt = loss_of(g, &fwd);
  g.backward(lt);

  auto eval_loss = [&]() {
    nn::Graph<double> ge;
    return ge.value(loss_of(ge, nullptr))[0];
  };

  const char* groups[4] = {"audio", "fusion", "regress", "seg"};
  bool ok = true;
  std::string why;
  double worst = 0;
  int checked = 0;
  for (const char* group : groups) {
    const auto idxs = net.params().group_indices(group);
    Rng prng(derive_seed(42, group));
    for (int probe = 0; probe < 10; ++probe) {
      const size_t pi = idxs[prng.uniform_int(idxs.size())];
      auto& tensor = net.params()[pi].value;
      const size_t j = static_cast<size_t>(prng.uniform_int(tensor.numel()));

      const int leaf = fwd.param_leaf[pi];
      const double analytic = g.has_grad(leaf) ? g.grad(leaf)[j] : 0.0;

      const double theta = tensor[j];
      // Small enough that ReLU kink crossings within +-h stay negligible;
      // double-precision FD roundoff is still ~1e-6 relative here.
      const double h = 1e-6 * std::max(1.0, std::abs(theta));
      tensor[j] = theta + h;
      const double lp = eval_loss();
      tensor[j] = theta - h;
      const double lm = eval_loss();
      tensor[j] = theta;
      const double fd = (lp - lm) / (2 * h);

      const double err = std::abs(analytic - fd);
      const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-8});
      worst = std::max(worst, err / scale);
      ++checked;
      if (err / scale > 1e-3) {
        ok = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s[%zu]@%zu analytic %.3e fd %.3e; ",
                      net.params()[pi].name.c_str(), pi, j, analytic, fd);
        why += buf;
      }
    }
  }
  char det[128];
  std::snprintf(det, sizeof(det), "%d probes, worst rel err %.2e", checked,
                worst);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("gradient-verification", ok, ok ? det : why, secs);
}

// ---------------------------------------------------------------------------
// 3. Metric oracle equivalence.
double iou3d_sample_oracle(const Box3D& a, const Box3D& b, size_t n,
                           uint64_t seed) {
  const double lo[3] = {
      std::min(a.center.x - a.size.x / 2, b.center.x - b.size.x / 2),
      std::min(a.center.y - a.size.y / 2, b.center.y - b.size.y / 2),
      std::min(a.center.z - a.size.z / 2, b.center.z - b.size.z / 2)};
  const double hi[3] = {
      std::max(a.center.x + a.size.x / 2, b.center.x + b.size.x / 2),
      std::max(a.center.y + a.size.y / 2, b.center.y + b.size.y / 2),
      std::max(a.center.z + a.size.z / 2, b.center.z + b.size.z / 2)};
  auto inside = [](const Box3D& bx, double x, double y, double z) {
    return std::abs(x - bx.center.x) <= bx.size.x / 2 &&
           std::abs(y - bx.center.y) <= bx.size.y / 2 &&
           std::abs(z - bx.center.z) <= bx.size.z / 2;
  };
  Rng rng(seed);
  size_t in_a = 0, in_b = 0, both = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(lo[0], hi[0]);
    const double y = rng.uniform(lo[1], hi[1]);
    const double z = rng.uniform(lo[2], hi[2]);
    const bool ia = inside(a, x, y, z), ib = inside(b, x, y, z);
    in_a += ia;
    in_b += ib;
    both += ia && ib;
  }
  const size_t uni = in_a + in_b - both;
  return uni == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(uni);
}

void criterion_metrics() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string why;

  Rng rng(77);
  auto random_box = [&]() {
    return Box3D{{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                  rng.uniform(-1.5, 1.5)},
                 {rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0),
                  rng.uniform(0.3, 2.0)},
                 0.0};
  };
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Box3D a = random_box();
    const Box3D b = (trial % 7 == 0) ? a : random_box();
    const double exact = iou3d(a, b);
    const double est = iou3d_sample_oracle(a, b, 200000, 5000 + trial);
    worst = std::max(worst, std::abs(exact - est));
  }
  if (worst > 0.01) {
    ok = false;
    why += "iou vs sampling oracle diverges; ";
  }

  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> ious(1 + rng.uniform_int(40));
    for (auto& v : ious) v = rng.uniform();
    const double tau = rng.uniform();
    size_t count = 0;
    for (double v : ious) count += v >= tau;
    if (ap_from_ious(ious, tau) !=
        static_cast<double>(count) / static_cast<double>(ious.size())) {
      ok = false;
      why += "ap != direct count; ";
      break;
    }
  }

  const Box3D unit{{0, 0, 0}, {1, 1, 1}, 0};
  const Box3D shifted{{0.5, 0, 0}, {1, 1, 1}, 0};
  if (std::abs(iou3d(unit, shifted) - 1.0 / 3.0) > 1e-12) {
    ok = false;
    why += "unit-cube offset != 1/3; ";
  }

  char det[96];
  std::snprintf(det, sizeof(det), "worst |iou-oracle| %.4f", worst);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("metric-oracle", ok, ok ? det : why, secs);
}

// ---------------------------------------------------------------------------
// 4. DSP correctness.
void criterion_dsp() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string why;

  MelParams p;
  if (stft_num_frames(19200, 2048, 1024) != 17) {
    ok = false;
    why += "frame count != 17; ";
  }

  std::vector<std::vector<float>> tone(1, std::vector<float>(19200));
  for (size_t i = 0; i < tone[0].size(); ++i)
    tone[0][i] =
        static_cast<float>(std::sin(2.0 * kPi * 1000.0 * i / p.sample_rate));
  const auto spec = mel_spectrogram(tone, p);
  const auto centers = mel_band_centers_hz(p);
  int predicted = 0;
  double best = 1e18;
  for (int m = 0; m < p.n_mels; ++m) {
    const double d = std::abs(hz_to_mel(centers[m]) - hz_to_mel(1000.0));
    if (d < best) {
      best = d;
      predicted = m;
    }
  }
  for (int t = 0; t < spec.dim(2); ++t) {
    int argmax = 0;
    float vmax = -1;
    for (int m = 0; m < p.n_mels; ++m)
      if (spec.at(0, m, t) > vmax) {
        vmax = spec.at(0, m, t);
        argmax = m;
      }
    if (std::abs(argmax - predicted) > 1) {
      ok = false;
      why += "1 kHz tone out of band; ";
      break;
    }
  }

  const std::vector<double> energies{0.0, 2.0, 4.0};
  if (mean_energy(energies) != 2.0 ||
      energy_filter_indices(energies, 2.0) != std::vector<size_t>{1, 2}) {
    ok = false;
    why += "energy filter case broken; ";
  }

  char det[96];
  std::snprintf(det, sizeof(det), "17 frames, tone in band %d", predicted);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("dsp-correctness", ok, ok ? det : why, secs);
}

// ---------------------------------------------------------------------------
// 5. Simulator physics.
int xcorr_peak_lag(const std::vector<float>& a, const std::vector<float>& b,
                   int max_lag) {
  double best = -1e300;
  int best_lag = 0;
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      const long j = static_cast<long>(i) + lag;
      if (j < 0 || j >= static_cast<long>(b.size())) continue;
      acc += static_cast<double>(a[i]) * b[j];
    }
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  return best_lag;
}

void criterion_simulator(Shared& sh) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string why;

  SceneConfig cfg = sh.scene;
  cfg.noise_snr_db = SceneConfig::kNoiseOffDb;
  const Vec3 rig = cfg.rig_center_world();
  Rng rng(909);
  int worst_lag_err = 0;
  double worst_amp_err = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double sx = rng.uniform(0.4, cfg.area_extent.x - 0.4);
    const double sy = rng.uniform(0.4, cfg.area_extent.y - 0.4);
    Trajectory traj;
    traj.frame_rate = cfg.frame_rate;
    traj.duration_s = 2.0;
    for (int k = 0; k < 40; ++k) {
      traj.times.push_back(k / cfg.frame_rate);
      traj.positions.push_back({sx, sy});
      traj.headings.push_back(0.0);
    }
    const AudioBuffer audio = synthesize_audio(traj, cfg);
    const Vec3 src{sx, sy, 0.0};
    const double d0 = distance(src, rig + cfg.mic_positions[0]);
    double peak0 = 0;
    for (float v : audio.channels[0])
      peak0 = std::max(peak0, std::abs(static_cast<double>(v)));
    for (int m = 1; m < 4; ++m) {
      const double dm = distance(src, rig + cfg.mic_positions[m]);
      const int expected = static_cast<int>(
          std::lround((dm - d0) / cfg.speed_of_sound * cfg.sample_rate));
      const int got =
          xcorr_peak_lag(audio.channels[0], audio.channels[m], 300);
      worst_lag_err = std::max(worst_lag_err, std::abs(got - expected));
      if (std::abs(got - expected) > 1) ok = false;

      double peakm = 0;
      for (float v : audio.channels[m])
        peakm = std::max(peakm, std::abs(static_cast<double>(v)));
      const double expect_ratio = d0 / dm;
      const double got_ratio = peakm / peak0;
      const double rel = std::abs(got_ratio - expect_ratio) / expect_ratio;
      worst_amp_err = std::max(worst_amp_err, rel);
      if (rel > 0.01) ok = false;
    }
  }
  if (!ok) why = "TDOA or amplitude-ratio out of tolerance";
  char det[128];
  std::snprintf(det, sizeof(det),
                "worst lag err %d samples, worst amp err %.3f%%",
                worst_lag_err, 100 * worst_amp_err);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("simulator-physics", ok, ok ? det : why, secs);
}

// ---------------------------------------------------------------------------
// 6. Fusion gating invariants.
void criterion_gating() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string why;

  ModelConfig lit;
  lit.gating = GatingMode::kLiteral;
  PedFuseNet<float> net_lit(lit);
  Rng rng(606);
  std::array<float, 7> reference{};
  for (int trial = 0; trial < 10; ++trial) {
    Tensor<float> mel({4, 256, 256});
    for (size_t i = 0; i < mel.numel(); ++i)
      mel[i] = static_cast<float>(rng.uniform(0, 8));
    Tensor<float> img({3, 256, 256});
    for (size_t i = 0; i < img.numel(); ++i)
      img[i] = static_cast<float>(rng.uniform());

    nn::Graph<float> g;
    PedFuseNet<float>::BuildOptions opt;
    opt.forced_gate = 0.0f;
    opt.with_segmentation = false;
    const auto f = net_lit.build(g, mel, img, opt);
    const auto& fused = g.value(f.fused);
    for (size_t i = 0; i < fused.numel(); ++i)
      if (fused[i] != 0.0f) {
        ok = false;
        why += "fused != 0 in literal mode; ";
        break;
      }
    std::array<float, 7> box{};
    for (int i = 0; i < 7; ++i) box[static_cast<size_t>(i)] = g.value(f.box)[i];
    if (trial == 0)
      reference = box;
    else if (std::memcmp(reference.data(), box.data(), sizeof(box)) != 0) {
      ok = false;
      why += "box not constant at gate 0; ";
    }
  }

  ModelConfig vis;
  vis.gating = GatingMode::kVisualOnly;
  PedFuseNet<float> net_vis(vis);
  Tensor<float> mel({4, 256, 256});
  for (size_t i = 0; i < mel.numel(); ++i)
    mel[i] = static_cast<float>(rng.uniform(0, 8));
  auto run = [&](uint64_t img_seed) {
    Tensor<float> img({3, 256, 256});
    Rng ir(img_seed);
    for (size_t i = 0; i < img.numel(); ++i)
      img[i] = static_cast<float>(ir.uniform());
    nn::Graph<float> g;
    PedFuseNet<float>::BuildOptions opt;
    opt.forced_gate = 0.0f;
    opt.with_segmentation = false;
    const auto f = net_vis.build(g, mel, img, opt);
    std::array<float, 7> box{};
    for (int i = 0; i < 7; ++i) box[static_cast<size_t>(i)] = g.value(f.box)[i];
    return box;
  };
  const auto b1 = run(1), b2 = run(2);
  if (std::memcmp(b1.data(), b2.data(), sizeof(b1)) != 0) {
    ok = false;
    why += "visual-only gate 0 not image-invariant (bitwise); ";
  }

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("fusion-gating", ok, ok ? "annihilation and invariance hold" : why,
         secs);
}

// ---------------------------------------------------------------------------
// 7. End-to-end learning signal on 20 minutes of synthetic data.
void criterion_learning(Shared& sh) {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;

  sh.data_dir = sh.work + "/data";
  sh.store_dir = sh.work + "/store";
  sh.av_run = sh.work + "/run_av";
  sh.scene.seed = 7;

  if (!fs::exists(fs::path(sh.data_dir) / "manifest.json")) {
    std::printf("  ... generating 1200 s scene\n");
    std::fflush(stdout);
    generate_dataset(sh.scene, 1200.0, sh.data_dir);
  }
  const DatasetManifest manifest = load_manifest(sh.data_dir);
  if (!fs::exists(fs::path(sh.store_dir) / "index.json")) {
    std::printf("  ... preprocessing\n");
    std::fflush(stdout);
    OracleTeacher teacher(manifest);
    IngestConfig icfg;
    icfg.seed = 7;
    preprocess_dataset(manifest, teacher, icfg, sh.store_dir);
  }
  const SampleStore store = SampleStore::load(sh.store_dir);
  sh.have_store = true;
  const auto train_idx = store.split_of(0);
  const auto val_idx = store.split_of(1);
  std::printf("  ... %zu train / %zu val samples post-filter\n",
              train_idx.size(), val_idx.size());
  std::fflush(stdout);

  // Mean-position baseline, fit on the training split.
  double mx = 0, my = 0;
  for (size_t i : train_idx) {
    mx += store.samples[i].box[0];
    my += store.samples[i].box[1];
  }
  mx /= static_cast<double>(train_idx.size());
  my /= static_cast<double>(train_idx.size());
  double bdx = 0, bdy = 0;
  for (size_t i : val_idx) {
    bdx += std::abs(store.samples[i].box[0] - mx);
    bdy += std::abs(store.samples[i].box[1] - my);
  }
  bdx /= static_cast<double>(val_idx.size());
  bdy /= static_cast<double>(val_idx.size());
  const double baseline = (bdx + bdy) / 2;

  ModelConfig mc;
  mc.init_seed = 7;
  PedFuseNet<float> net(mc);
  TrainConfig tc;  // defaults: lr 1e-4, batch 16
  tc.epochs = 10;
  tc.seed = 7;
  tc.out_dir = sh.av_run;
  std::printf("  ... training default model, 10 epochs\n");
  std::fflush(stdout);
  const TrainResult result = train_on(net, store, train_idx, val_idx, tc);

  const PedFuseNet<float> best = load_checkpoint(result.checkpoint_path);
  const EvalReport report =
      evaluate(best, store, val_idx, EvalCondition{}, "av-fused");
  const double model_err = (report.dx + report.dy) / 2;
  const double ap02 = report.ap_by_threshold[0];

  if (!(model_err < 0.5 * baseline)) ok = false;
  if (!(ap02 > 0.0)) ok = false;
  sh.have_av = ok;

  // Presence-score separation on the held-out split (detect-head contract).
  double din = 0, dout = 0;
  size_t nin = 0, nout = 0;
  const int sz = best.config().input_size;
  for (size_t i : val_idx) {
    const auto& s = store.samples[i];
    const auto out = best.forward(store_mel_input(s, sz),
                                  store_image_input(s, sz));
    if (s.in_fov) {
      din += out.dhat;
      ++nin;
    } else {
      dout += out.dhat;
      ++nout;
    }
  }
  if (nin) din /= static_cast<double>(nin);
  if (nout) dout /= static_cast<double>(nout);
  std::printf("  ... mean dhat: in-FOV %.3f (n=%zu), out-FOV %.3f (n=%zu)\n",
              din, nin, dout, nout);

  char det[256];
  std::snprintf(det, sizeof(det),
                "(Dx+Dy)/2 %.3f vs baseline %.3f (need < %.3f); AP@0.2 %.3f",
                model_err, baseline, 0.5 * baseline, ap02);
  detail = det;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("end-to-end-learning", ok, detail, secs);
}

// ---------------------------------------------------------------------------
// 8. Dark-condition ordering: fused model beats the visual-only model.
void criterion_dark(Shared& sh) {
  const auto t0 = Clock::now();
  if (!sh.have_store) {
    record("dark-condition", false, "skipped: no store from criterion 7", 0);
    return;
  }
  const SampleStore store = SampleStore::load(sh.store_dir);
  const auto train_idx = store.split_of(0);
  const auto val_idx = store.split_of(1);

  sh.vo_run = sh.work + "/run_vo";
  ModelConfig mc;
  mc.init_seed = 7;
  mc.zero_audio = true;  // visual-only comparison model
  PedFuseNet<float> net(mc);
  TrainConfig tc;
  tc.epochs = 10;
  tc.seed = 7;
  tc.out_dir = sh.vo_run;
  std::printf("  ... training visual-only model, 10 epochs\n");
  std::fflush(stdout);
  const TrainResult vo = train_on(net, store, train_idx, val_idx, tc);

  const PedFuseNet<float> av = load_checkpoint(sh.av_run + "/best.ckpt");
  const PedFuseNet<float> vonet = load_checkpoint(vo.checkpoint_path);

  EvalCondition dark;
  dark.dark = true;
  const EvalReport av_dark = evaluate(av, store, val_idx, dark, "av-fused");
  const EvalReport vo_dark = evaluate(vonet, store, val_idx, dark, "visual-only");

  std::printf("%s", report_table({av_dark, vo_dark}).c_str());
  const double av_err = (av_dark.dx + av_dark.dy) / 2;
  const double vo_err = (vo_dark.dx + vo_dark.dy) / 2;
  const bool ok = av_err < vo_err;

  char det[160];
  std::snprintf(det, sizeof(det), "dark (Dx+Dy)/2: fused %.3f < visual-only %.3f",
                av_err, vo_err);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("dark-condition", ok, det, secs);
}

// ---------------------------------------------------------------------------
// 9. Ablation harness: four configurations, 2-epoch smoke budget.
void criterion_ablation(Shared& sh) {
  const auto t0 = Clock::now();
  if (!sh.have_store) {
    record("ablation-harness", false, "skipped: no store from criterion 7", 0);
    return;
  }
  const SampleStore store = SampleStore::load(sh.store_dir);
  auto train_idx = store.split_of(0);
  auto val_idx = store.split_of(1);
  if (train_idx.size() > 320) train_idx.resize(320);
  if (val_idx.size() > 80) val_idx.resize(80);

  struct Config {
    bool attention, segmentation;
    const char* label;
  };
  const Config configs[4] = {{false, false, "attention- segmentation-"},
                             {false, true, "attention- segmentation+"},
                             {true, false, "attention+ segmentation-"},
                             {true, true, "attention+ segmentation+"}};
  std::vector<EvalReport> rows;
  bool ok = true;
  for (const auto& c : configs) {
    ModelConfig mc;
    mc.init_seed = 7;
    mc.use_attention = c.attention;
    mc.use_segmentation = c.segmentation;
    PedFuseNet<float> net(mc);
    TrainConfig tc;
    tc.epochs = 2;
    tc.seed = 7;
    tc.out_dir = sh.work + "/ablation";
    try {
      train_on(net, store, train_idx, val_idx, tc);
      rows.push_back(evaluate(net, store, val_idx, EvalCondition{}, c.label));
    } catch (const std::exception& e) {
      ok = false;
      std::printf("  ablation %s failed: %s\n", c.label, e.what());
    }
  }
  if (rows.size() != 4) ok = false;
  for (size_t i = 0; ok && i < rows.size(); ++i)
    for (size_t j = i + 1; j < rows.size(); ++j)
      if (rows[i].approach == rows[j].approach) ok = false;

  const std::string table = report_table(rows);
  std::printf("%s", table.c_str());
  std::ofstream out(fs::path(sh.work) / "ablation_report.txt");
  out << table;

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  record("ablation-harness", ok, "4 distinct labeled configurations ran", secs);
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);

  std::printf(
      "[INFO] paper-scale Table I/II/III numbers are not reproducible at desk "
      "scale\n[INFO] (private 9-person dataset); synthetic-oracle criteria "
      "below stand in,\n[INFO] and eval emits Table-I-layout rows for a "
      "future real-data run.\n");

  Shared sh;
  fs::create_directories(sh.work);

  auto want = [&](int n) { return only == 0 || only == n; };
  if (want(1)) criterion_losses();
  if (want(2)) criterion_gradients();
  if (want(3)) criterion_metrics();
  if (want(4)) criterion_dsp();
  if (want(5)) criterion_simulator(sh);
  if (want(6)) criterion_gating();
  if (want(7)) criterion_learning(sh);
  if (want(8)) criterion_dark(sh);
  if (want(9)) criterion_ablation(sh);

  int failures = 0;
  for (const auto& o : g_outcomes) failures += !o.pass;
  std::printf("\n%zu criteria run, %d failed\n", g_outcomes.size(), failures);
  return failures == 0 ? 0 : 1;
}
