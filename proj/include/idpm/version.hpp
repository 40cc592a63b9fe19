//
// Copyright 2026 The idpm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef IDPM_VERSION_HPP_
#define IDPM_VERSION_HPP_

namespace idpm {

inline constexpr char kToolVersion[] = "1.0.0";
// Version of the manifest and experiment-config JSON layouts.
inline constexpr int kSchemaVersion = 1;

}  // namespace idpm

#endif  // IDPM_VERSION_HPP_
