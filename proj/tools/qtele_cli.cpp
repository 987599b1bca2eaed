// Copyright 2026 The qtele Authors
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

#include <iostream>

#include "qtele/cli/config.hpp"
#include "qtele/cli/runner.hpp"
#include "qtele/kernels.hpp"

int main(int argc, char **argv) {
    using namespace qtele::cli;
    try {
        const RunConfig config = parse_config(argc, argv);
        return run(config, std::cerr);
    } catch (const HelpRequested &help) {
        std::cout << help.what();
        std::cout << "\nKernel backend: " << qtele::kernels::active().name << '\n';
        return 0;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qtele::Error &e) {
        std::cerr << "error (" << qtele::to_string(e.kind()) << "): " << e.what()
                  << '\n';
        return 1;
    }
}
