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

#include "qtele/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace qtele::oracle {

namespace {

constexpr double kEmptyCell = 1e-15;

// alpha_{(f + m) mod N} exp(-i 2 pi f n / N)
Complex bob_factor(const InputState &input, std::size_t levels, Digit n, Digit m,
                   std::size_t f) {
    return input.amplitudes()[(f + m) % levels] *
           root_of_unity(levels, -static_cast<long long>(f * n));
}

std::size_t flat(std::size_t levels, std::initializer_list<Digit> digits) {
    std::size_t index = 0;
    for (Digit d : digits) {
        index = index * levels + d;
    }
    return index;
}

void check_match(const InputState &input, const ChannelSpec &channel) {
    if (input.level_count() != channel.level_count()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "input and channel dimensions differ");
    }
}

StateVector zero_qudit(std::size_t levels) {
    return StateVector::unnormalized(levels, 1, std::vector<Complex>(levels));
}

Eigen::MatrixXcd psi_matrix(const ChannelSpec &channel) {
    const std::size_t levels = channel.level_count();
    const auto dim = static_cast<Eigen::Index>(levels * levels);
    Eigen::MatrixXcd a(dim, dim);
    const auto basis = psi_basis(channel);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto amps = basis[static_cast<std::size_t>(col)].amplitudes();
        for (Eigen::Index row = 0; row < dim; ++row) {
            a(row, col) = amps[static_cast<std::size_t>(row)];
        }
    }
    return a;
}

} // namespace

double OutcomeTable::total_probability() const noexcept {
    double total = 0.0;
    for (const auto &row : rows) {
        total += row.probability;
    }
    return total;
}

double OutcomeTable::flag_probability(Digit flag) const noexcept {
    double total = 0.0;
    for (const auto &row : rows) {
        if (row.flag == flag) {
            total += row.probability;
        }
    }
    return total;
}

const OutcomeRow *OutcomeTable::success_cell(Digit m, Digit n) const noexcept {
    for (const auto &row : rows) {
        if (row.flag == 0 && row.first == m && row.second == n) {
            return &row;
        }
    }
    return nullptr;
}

const OutcomeRow *OutcomeTable::failure_cell(Digit j) const noexcept {
    for (const auto &row : rows) {
        if (row.flag == 1 && row.first == j) {
            return &row;
        }
    }
    return nullptr;
}

StateVector reconstruct_total(const InputState &input, const ChannelSpec &channel) {
    check_match(input, channel);
    const std::size_t levels = channel.level_count();
    const double inv_n = 1.0 / static_cast<double>(levels);
    std::vector<Complex> amps(levels * levels * levels);
    for (Digit n = 0; n < levels; ++n) {
        for (Digit m = 0; m < levels; ++m) {
            const auto psi = psi_state(channel, n, m);
            for (std::size_t pair = 0; pair < levels * levels; ++pair) {
                if (psi[pair] == Complex{}) {
                    continue;
                }
                for (std::size_t f = 0; f < levels; ++f) {
                    amps[pair * levels + f] +=
                        inv_n * psi[pair] * bob_factor(input, levels, n, m, f);
                }
            }
        }
    }
    return StateVector::unnormalized(levels, 3, std::move(amps));
}

StateVector closed_form_delta(const InputState &input, const ChannelSpec &channel) {
    check_match(input, channel);
    const std::size_t levels = channel.level_count();
    const double b0 = channel.b0();
    const double prefactor = b0 / static_cast<double>(levels);
    std::vector<Complex> amps(levels * levels * levels * levels);

    // |0>_0 (b0/N) sum_{m,n} |m>_1 (sum_j w^{jn} |j>_2) U^(n,m)|phi>_3
    if (b0 > 0.0) {
        for (Digit m = 0; m < levels; ++m) {
            for (Digit n = 0; n < levels; ++n) {
                for (std::size_t j = 0; j < levels; ++j) {
                    const Complex wj =
                        prefactor * root_of_unity(levels, static_cast<long long>(j * n));
                    for (std::size_t f = 0; f < levels; ++f) {
                        amps[flat(levels, {0, m, j, f})] +=
                            wj * bob_factor(input, levels, n, m, f);
                    }
                }
            }
        }
    }
    // |1>_0 sum_{j>=1} sqrt(b_j^2 - b0^2) U^(0,j+1)|phi>_1 |jj>_23
    for (std::size_t j = 1; j < levels; ++j) {
        const double bj = channel.coefficient(j);
        const double weight = std::sqrt(std::max(0.0, bj * bj - b0 * b0));
        for (std::size_t k = 0; k < levels; ++k) {
            amps[flat(levels, {1, k, j, j})] =
                weight * input.amplitudes()[(k + j + 1) % levels];
        }
    }
    return StateVector::unnormalized(levels, 4, std::move(amps));
}

OutcomeTable enumerate_outcomes(const InputState &input, const ChannelSpec &channel) {
    const std::size_t levels = channel.level_count();
    const auto delta = closed_form_delta(input, channel);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(levels));
    OutcomeTable table{levels, {}};

    for (Digit m = 0; m < levels; ++m) {
        for (Digit n = 0; n < levels; ++n) {
            // <kappa_n|_2 applied to the flag-0, payload-m block
            std::vector<Complex> bob(levels);
            for (std::size_t f = 0; f < levels; ++f) {
                for (std::size_t j = 0; j < levels; ++j) {
                    const Complex kappa =
                        inv_sqrt_n *
                        root_of_unity(levels, static_cast<long long>(j * n));
                    bob[f] += std::conj(kappa) * delta[flat(levels, {0, m, j, f})];
                }
            }
            double p = 0.0;
            for (const auto &a : bob) {
                p += std::norm(a);
            }
            if (p < kEmptyCell) {
                table.rows.push_back({0, m, n, std::max(p, 0.0), zero_qudit(levels),
                                      zero_qudit(levels), 0.0});
                continue;
            }
            const double scale = 1.0 / std::sqrt(p);
            // (U^(n,m)^dagger v)_{f+m} = w^{fn} v_f
            std::vector<Complex> fixed(levels);
            for (std::size_t f = 0; f < levels; ++f) {
                bob[f] *= scale;
                fixed[(f + m) % levels] =
                    root_of_unity(levels, static_cast<long long>(f * n)) * bob[f];
            }
            auto before = StateVector::unnormalized(levels, 1, bob);
            auto after = StateVector::unnormalized(levels, 1, fixed);
            const double f = fidelity(after, input.state());
            table.rows.push_back({0, m, n, p, std::move(before), std::move(after), f});
        }
    }

    for (Digit j = 1; j < levels; ++j) {
        std::vector<Complex> alice(levels);
        double p = 0.0;
        for (std::size_t k = 0; k < levels; ++k) {
            for (std::size_t bob = 0; bob < levels; ++bob) {
                const Complex a = delta[flat(levels, {1, k, j, bob})];
                p += std::norm(a);
                if (bob == j) {
                    alice[k] = a;
                }
            }
        }
        if (p < kEmptyCell) {
            table.rows.push_back({1, j, 0, std::max(p, 0.0), zero_qudit(levels),
                                  zero_qudit(levels), 0.0});
            continue;
        }
        const double scale = 1.0 / std::sqrt(p);
        // (U^(0,s)^dagger v)_{k+s} = v_k with s = j + 1
        std::vector<Complex> fixed(levels);
        for (std::size_t k = 0; k < levels; ++k) {
            alice[k] *= scale;
            fixed[(k + j + 1) % levels] = alice[k];
        }
        auto before = StateVector::unnormalized(levels, 1, alice);
        auto after = StateVector::unnormalized(levels, 1, fixed);
        const double f = fidelity(after, input.state());
        table.rows.push_back({1, j, 0, p, std::move(before), std::move(after), f});
    }
    return table;
}

GramRank gram_rank(const ChannelSpec &channel) {
    const Eigen::MatrixXcd a = psi_matrix(channel);
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    const double det = std::abs(gram.partialPivLu().determinant());
    // The determinant scales like (N^N prod b_k^2)^N and underflows any fixed
    // cutoff for small b_0, so rank decides below it.
    if (det > 1e-12) {
        return {det, true};
    }
    return {det, Eigen::FullPivLU<Eigen::MatrixXcd>(a).rank() == a.cols()};
}

std::optional<std::vector<std::vector<Complex>>>
expand_in_psi_basis(const StateVector &total, const ChannelSpec &channel) {
    const std::size_t levels = channel.level_count();
    if (total.level_count() != levels || total.slot_count() != 3) {
        throw Error(ErrorKind::DimensionMismatch,
                    "expansion expects a three-slot register matching the channel");
    }
    if (!gram_rank(channel).independent) {
        return std::nullopt;
    }
    const auto dim = static_cast<Eigen::Index>(levels * levels);
    const Eigen::MatrixXcd a = psi_matrix(channel);
    // One right-hand side per Bob digit f.
    Eigen::MatrixXcd rhs(dim, static_cast<Eigen::Index>(levels));
    for (Eigen::Index pair = 0; pair < dim; ++pair) {
        for (std::size_t f = 0; f < levels; ++f) {
            rhs(pair, static_cast<Eigen::Index>(f)) =
                total[static_cast<std::size_t>(pair) * levels + f];
        }
    }
    const Eigen::MatrixXcd coeffs = a.fullPivLu().solve(rhs);
    if ((a * coeffs - rhs).cwiseAbs().maxCoeff() > 1e-9) {
        return std::nullopt;
    }
    std::vector<std::vector<Complex>> out(levels * levels,
                                          std::vector<Complex>(levels));
    for (Eigen::Index nm = 0; nm < dim; ++nm) {
        for (std::size_t f = 0; f < levels; ++f) {
            out[static_cast<std::size_t>(nm)][f] =
                coeffs(nm, static_cast<Eigen::Index>(f));
        }
    }
    return out;
}

} // namespace qtele::oracle
