// core/include/pedfuse/sim/audio_synth.h

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

#ifndef PEDFUSE_SIM_AUDIO_SYNTH_H_
#define PEDFUSE_SIM_AUDIO_SYNTH_H_

#include <string>

#include "pedfuse/sim/scene.h"
#include "pedfuse/wav.h"

namespace pedfuse {

// Footstep pulse: 10 ms decaying 500 Hz sinusoid, evaluated analytically at
// exact sample times so fractional inter-channel delays survive sampling.
double footstep_pulse(double t_s);
inline constexpr double kFootstepPulseLenS = 0.010;
inline constexpr double kFootstepGain = 0.25;
inline constexpr double kMinSourceMicDistance = 0.01;

struct SynthStats {
  size_t steps = 0;
  size_t clamped_distances = 0;  // source closer than 1 cm to a microphone
};

// Renders the 4-channel footstep stream for a trajectory: one pulse per
// step_interval_s, per-mic delay distance/c and amplitude 1/distance, plus
// white noise at noise_snr_db (disabled at >= SceneConfig::kNoiseOffDb).
AudioBuffer synthesize_audio(const Trajectory& traj, const SceneConfig& config,
                             SynthStats* stats = nullptr);

// Same signal, streamed to a WAV file in blocks; byte-identical samples to
// quantizing synthesize_audio()'s output.
SynthStats synthesize_audio_to_wav(const Trajectory& traj,
                                   const SceneConfig& config,
                                   const std::string& path);

}  // namespace pedfuse

#endif  // PEDFUSE_SIM_AUDIO_SYNTH_H_
