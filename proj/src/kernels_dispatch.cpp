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

#include <cstdlib>
#include <string>

#include "qtele/kernels.hpp"

namespace qtele::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(QTELE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable &best_available() noexcept {
#ifdef QTELE_HAVE_AVX2
    if (cpu_has_avx2()) {
        return detail::avx2_table();
    }
#endif
    return scalar_table();
}

const KernelTable &process_default() noexcept {
    static const KernelTable &chosen = [] () -> const KernelTable & {
        const char *env = std::getenv("QTELE_KERNELS");
        const std::string want = env ? env : "auto";
        if (want == "scalar") {
            return scalar_table();
        }
        // "avx2" on a host without it falls back silently, same as "auto".
        return best_available();
    }();
    return chosen;
}

thread_local const KernelTable *thread_override = nullptr;

} // namespace

bool available(Backend backend) noexcept {
    switch (backend) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
        return cpu_has_avx2();
    }
    return false;
}

const KernelTable &table(Backend backend) {
    if (!available(backend)) {
        throw Error(ErrorKind::InvalidArgument,
                    "kernel backend '" + std::string(name(backend)) +
                        "' is not available on this host");
    }
#ifdef QTELE_HAVE_AVX2
    if (backend == Backend::Avx2) {
        return detail::avx2_table();
    }
#endif
    return scalar_table();
}

const KernelTable &active() noexcept {
    return thread_override ? *thread_override : process_default();
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::Scalar};
    if (available(Backend::Avx2)) {
        out.push_back(Backend::Avx2);
    }
    return out;
}

std::string_view name(Backend backend) noexcept {
    switch (backend) {
    case Backend::Scalar:
        return "scalar";
    case Backend::Avx2:
        return "avx2";
    }
    return "unknown";
}

ScopedBackend::ScopedBackend(Backend backend)
    : previous_(thread_override) {
    thread_override = &table(backend);
}

ScopedBackend::~ScopedBackend() { thread_override = previous_; }

} // namespace qtele::kernels
