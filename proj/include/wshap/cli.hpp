/*
 * Copyright 2026 The wshap authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WSHAP_CLI_HPP
#define WSHAP_CLI_HPP

namespace wshap {

/// Subcommand driver. Returns 0 on success, 1 on usage errors, 2 on
/// runtime errors. Never calls exit(); safe to invoke in-process.
int cli_main(int argc, const char* const* argv);

}  // namespace wshap

#endif  // WSHAP_CLI_HPP
