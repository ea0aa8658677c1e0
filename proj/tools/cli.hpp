// Copyright 2026 The qecopt Authors
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


#ifndef QECOPT_TOOLS_CLI_HPP
#define QECOPT_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace qecopt::cli {

// Exit codes: 0 success, 1 certification failed, 2 bad configuration or
// input file, 3 numerical failure. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qecopt::cli

#endif  // QECOPT_TOOLS_CLI_HPP
