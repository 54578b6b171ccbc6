// core/include/pedfuse/common.h

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

#ifndef PEDFUSE_COMMON_H_
#define PEDFUSE_COMMON_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace pedfuse {

// Bad user-supplied configuration or arguments.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / serialization failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape or invariant violations inside the numeric code.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace internal {
inline std::string check_msg(const char* cond, const char* file, int line,
                             const std::string& extra) {
  std::ostringstream os;
  os << "check failed: " << cond << " (" << file << ":" << line << ")";
  if (!extra.empty()) os << " " << extra;
  return os.str();
}
}  // namespace internal

}  // namespace pedfuse

#define PF_CHECK(cond)                                                 \
  do {                                                                 \
    if (!(cond))                                                       \
      throw ::pedfuse::ShapeError(                                     \
          ::pedfuse::internal::check_msg(#cond, __FILE__, __LINE__, "")); \
  } while (0)

#define PF_CHECK_MSG(cond, msg)                                            \
  do {                                                                     \
    if (!(cond))                                                           \
      throw ::pedfuse::ShapeError(                                         \
          ::pedfuse::internal::check_msg(#cond, __FILE__, __LINE__, msg)); \
  } while (0)

#define PF_CHECK_CFG(cond, msg)               \
  do {                                        \
    if (!(cond)) throw ::pedfuse::ConfigError(msg); \
  } while (0)

#endif  // PEDFUSE_COMMON_H_
