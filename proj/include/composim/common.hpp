// Copyright 2026 The composim Authors
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

#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace composim {

inline constexpr const char *kVersion = "0.3.0";

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    parse_error,
    bad_pauli,
    inconsistent_qubits,
    empty_hamiltonian,
    not_applicable,
    unconverged,
    io_error,
};

inline const char *error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::bad_pauli: return "bad_pauli";
        case ErrorCode::inconsistent_qubits: return "inconsistent_qubits";
        case ErrorCode::empty_hamiltonian: return "empty_hamiltonian";
        case ErrorCode::not_applicable: return "not_applicable";
        case ErrorCode::unconverged: return "unconverged";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

   private:
    ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string &msg) {
    if (!ok) throw Error(code, msg);
}

enum class TimeKind { real, imaginary };

inline const char *time_kind_name(TimeKind k) { return k == TimeKind::real ? "real" : "imaginary"; }

/// Thread count after applying the COMPOSIM_THREADS override. Zero or negative
/// means "use hardware concurrency".
inline int resolve_threads(int requested) {
    if (const char *env = std::getenv("COMPOSIM_THREADS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) requested = static_cast<int>(v);
    }
    if (requested <= 0) requested = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return requested;
}

/// Runs f(i) for i in [0, n) on up to `threads` workers. Work is handed out
/// through an atomic counter, so f must write results by index only. The
/// first exception thrown by any worker is rethrown on the caller.
template <typename F>
void parallel_for(size_t n, int threads, F &&f) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads <= 1) {
        for (size_t i = 0; i < n; i++) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; t++) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace composim
