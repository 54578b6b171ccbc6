// core/include/pedfuse/model/checkpoint.h

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

#ifndef PEDFUSE_MODEL_CHECKPOINT_H_
#define PEDFUSE_MODEL_CHECKPOINT_H_

#include <string>

#include "pedfuse/model/net.h"

namespace pedfuse {

// Versioned container: magic + JSON header (model config, tensor names and
// shapes) + raw little-endian float32 payload in header order.
void save_checkpoint(const PedFuseNet<float>& net, const std::string& path);
PedFuseNet<float> load_checkpoint(const std::string& path);

}  // namespace pedfuse

#endif  // PEDFUSE_MODEL_CHECKPOINT_H_
