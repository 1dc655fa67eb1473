// Copyright 2026 The mshgnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "mshgnn/morphology.hpp"

namespace mshgnn::testing {

inline RobotMorphology preset(const std::string& file) {
  return load_morphology_file(default_config_dir() + "/" + file);
}

inline RobotMorphology fixture(const std::string& file) {
  return load_morphology_file(std::string(MSHGNN_FIXTURE_DIR) + "/" + file);
}

inline const char* const kPresets[] = {"mini_cheetah_k4.cfg", "a1_c2.cfg", "solo_k4.cfg"};

}  // namespace mshgnn::testing
