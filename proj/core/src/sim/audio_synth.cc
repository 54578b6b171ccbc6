// core/src/sim/audio_synth.cc

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

#include "pedfuse/sim/audio_synth.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "pedfuse/rng.h"

namespace pedfuse {

double footstep_pulse(double t_s) {
  if (t_s < 0.0 || t_s >= kFootstepPulseLenS) return 0.0;
  return std::sin(2.0 * kPi * 500.0 * t_s) * std::exp(-400.0 * t_s);
}

namespace {

struct StepEvent {
  double arrival[4];  // seconds, per microphone
  double amp[4];
};

class FootstepRenderer {
 public:
  FootstepRenderer(const Trajectory& traj, const SceneConfig& cfg)
      : cfg_(cfg) {
    PF_CHECK_MSG(traj.size() > 0, "synthesize_audio: empty trajectory");
    cfg.validate();
    n_samples_ = static_cast<size_t>(
        std::llround(traj.duration_s * cfg.sample_rate));

    const Vec3 rig = cfg.rig_center_world();
    std::array<Vec3, 4> mics_world;
    for (int m = 0; m < 4; ++m) mics_world[m] = rig + cfg.mic_positions[m];

    // One pulse per step interval, first one half an interval in.
    for (double onset = 0.5 * cfg.step_interval_s; onset < traj.duration_s;
         onset += cfg.step_interval_s) {
      const auto p = traj.position_at(onset);
      const Vec3 src{p[0], p[1], 0.0};
      StepEvent ev;
      for (int m = 0; m < 4; ++m) {
        double d = distance(src, mics_world[m]);
        if (d < kMinSourceMicDistance) {
          d = kMinSourceMicDistance;
          ++stats_.clamped_distances;
        }
        ev.arrival[m] = onset + d / cfg.speed_of_sound;
        ev.amp[m] = kFootstepGain / d;
      }
      events_.push_back(ev);
      ++stats_.steps;
    }

    if (cfg.noise_enabled()) {
      // Analytic clean-signal power sets the noise floor; pulse energy is
      // taken from the zero-offset sampling of the template.
      double pulse_energy = 0.0;
      for (size_t i = 0; i < static_cast<size_t>(kFootstepPulseLenS *
                                                 cfg.sample_rate);
           ++i) {
        const double v = footstep_pulse(static_cast<double>(i) / cfg.sample_rate);
        pulse_energy += v * v;
      }
      double mean_power = 0.0;
      for (const auto& ev : events_)
        for (int m = 0; m < 4; ++m)
          mean_power += ev.amp[m] * ev.amp[m] * pulse_energy;
      mean_power /= std::max<size_t>(1, n_samples_) * 4.0;
      noise_sigma_ = std::sqrt(mean_power *
                               std::pow(10.0, -cfg.noise_snr_db / 10.0));
      for (int m = 0; m < 4; ++m)
        noise_rng_[m] = std::make_unique<Rng>(
            derive_seed(cfg.seed, "mic-noise", static_cast<uint64_t>(m)));
    }
  }

  size_t total_samples() const { return n_samples_; }
  const SynthStats& stats() const { return stats_; }

  // Renders samples [n0, n0+len) into block[ch]. Blocks must be requested
  // sequentially from 0 so the per-channel noise streams stay aligned.
  void render_block(size_t n0, size_t len,
                    std::vector<std::vector<float>>& block) {
    const double fs = cfg_.sample_rate;
    block.assign(4, std::vector<float>(len, 0.0f));

    const double t0 = static_cast<double>(n0) / fs;
    const double t1 = static_cast<double>(n0 + len) / fs;
    for (const auto& ev : events_) {
      for (int m = 0; m < 4; ++m) {
        if (ev.arrival[m] >= t1 || ev.arrival[m] + kFootstepPulseLenS <= t0)
          continue;
        const size_t first =
            std::max(n0, static_cast<size_t>(std::ceil(ev.arrival[m] * fs)));
        const size_t last = std::min(
            n0 + len, static_cast<size_t>(
                          std::ceil((ev.arrival[m] + kFootstepPulseLenS) * fs)));
        for (size_t n = first; n < last; ++n) {
          const double t = static_cast<double>(n) / fs - ev.arrival[m];
          block[m][n - n0] +=
              static_cast<float>(ev.amp[m] * footstep_pulse(t));
        }
      }
    }

    if (noise_sigma_ > 0.0) {
      for (int m = 0; m < 4; ++m) {
        auto& rng = *noise_rng_[m];
        for (size_t i = 0; i < len; ++i)
          block[m][i] += static_cast<float>(noise_sigma_ * rng.normal());
      }
    }
  }

 private:
  SceneConfig cfg_;
  size_t n_samples_ = 0;
  std::vector<StepEvent> events_;
  SynthStats stats_;
  double noise_sigma_ = 0.0;
  std::unique_ptr<Rng> noise_rng_[4];
};

}  // namespace

AudioBuffer synthesize_audio(const Trajectory& traj, const SceneConfig& config,
                             SynthStats* stats) {
  FootstepRenderer r(traj, config);
  AudioBuffer out;
  out.sample_rate = config.sample_rate;
  r.render_block(0, r.total_samples(), out.channels);
  if (stats) *stats = r.stats();
  return out;
}

SynthStats synthesize_audio_to_wav(const Trajectory& traj,
                                   const SceneConfig& config,
                                   const std::string& path) {
  FootstepRenderer r(traj, config);
  WavStreamWriter writer(path, config.sample_rate, 4);
  const size_t block_len = static_cast<size_t>(config.sample_rate) * 5;
  std::vector<std::vector<float>> block;
  for (size_t n0 = 0; n0 < r.total_samples(); n0 += block_len) {
    const size_t len = std::min(block_len, r.total_samples() - n0);
    r.render_block(n0, len, block);
    writer.append(block);
  }
  writer.close();
  return r.stats();
}

}  // namespace pedfuse
