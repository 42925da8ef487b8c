// Copyright 2026 The zxforge Authors
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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zxforge/diagram.hpp"

namespace zxforge {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxTensorBoundaries = 12;
inline constexpr std::size_t kMaxTensorWires = 24;

/// Dense matrix. Rows index output legs, columns index input legs, first leg most significant.
struct ComplexMatrix {
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::vector<Complex> data = {Complex(1)};
    std::vector<std::string> row_legs;
    std::vector<std::string> col_legs;

    [[nodiscard]] Complex at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    Complex &at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

inline Complex unit_phase(Phase p) {
    double rad = p.degrees() * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

namespace detail {

// Bit i of a flat index holds the value of labels[i].
struct LabeledTensor {
    std::vector<int> labels;
    std::vector<Complex> data;
};

inline LabeledTensor contract_pair(const LabeledTensor &a, const LabeledTensor &b) {
    std::vector<int> shared;
    std::vector<int> out_labels;
    for (int l : a.labels) {
        if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end()) {
            shared.push_back(l);
        } else {
            out_labels.push_back(l);
        }
    }
    for (int l : b.labels) {
        if (std::find(shared.begin(), shared.end(), l) == shared.end()) {
            out_labels.push_back(l);
        }
    }
    if (out_labels.size() > 2 * kMaxTensorBoundaries) {
        throw ResourceLimit("tensor contraction rank exceeds limit");
    }
    auto bit_of = [](const std::vector<int> &labels, int l) {
        return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), l) - labels.begin());
    };
    // For each output / shared bit, where it lands in a and b (npos if absent).
    const std::size_t npos = 64;
    std::vector<std::size_t> out_in_a, out_in_b, sh_in_a, sh_in_b;
    for (int l : out_labels) {
        std::size_t ia = bit_of(a.labels, l);
        std::size_t ib = bit_of(b.labels, l);
        out_in_a.push_back(ia < a.labels.size() ? ia : npos);
        out_in_b.push_back(ib < b.labels.size() ? ib : npos);
    }
    for (int l : shared) {
        sh_in_a.push_back(bit_of(a.labels, l));
        sh_in_b.push_back(bit_of(b.labels, l));
    }
    LabeledTensor r;
    r.labels = out_labels;
    r.data.assign(std::size_t{1} << out_labels.size(), Complex(0));
    for (std::size_t o = 0; o < r.data.size(); ++o) {
        std::size_t ia = 0;
        std::size_t ib = 0;
        for (std::size_t k = 0; k < out_labels.size(); ++k) {
            if ((o >> k) & 1U) {
                if (out_in_a[k] != npos) {
                    ia |= std::size_t{1} << out_in_a[k];
                } else {
                    ib |= std::size_t{1} << out_in_b[k];
                }
            }
        }
        Complex acc(0);
        for (std::size_t s = 0; s < (std::size_t{1} << shared.size()); ++s) {
            std::size_t ja = ia;
            std::size_t jb = ib;
            for (std::size_t k = 0; k < shared.size(); ++k) {
                if ((s >> k) & 1U) {
                    ja |= std::size_t{1} << sh_in_a[k];
                    jb |= std::size_t{1} << sh_in_b[k];
                }
            }
            acc += a.data[ja] * b.data[jb];
        }
        r.data[o] = acc;
    }
    return r;
}

// Value of a generator on a full leg assignment (bit k = leg k).
inline Complex generator_entry(const Node &n, std::size_t bits, std::size_t legs) {
    std::size_t ones = static_cast<std::size_t>(__builtin_popcountll(bits));
    Complex e = unit_phase(n.phase);
    switch (n.type) {
        case NodeType::spider:
            if (n.color == Color::Z) {
                Complex v(0);
                if (ones == 0) {
                    v += 1.0;
                }
                if (ones == legs) {
                    v += e;
                }
                return v;
            }
            return Complex(1.0) + e * ((ones % 2) ? -1.0 : 1.0);
        case NodeType::hbox:
            return ones == legs ? e : Complex(1.0);
        case NodeType::boundary:
            break;
    }
    return ones % 2 == 0 ? Complex(1.0) : Complex(0.0);
}

// Node tensor over its non-loop wires. Self-loop legs are summed out here.
inline LabeledTensor node_tensor(const Diagram &d, NodeIndex v, const std::vector<HalfEdge> &half_edges) {
    std::vector<int> leg_label;
    for (HalfEdge h : half_edges) {
        leg_label.push_back(static_cast<int>(h >> 1));
    }
    LabeledTensor t;
    for (int l : leg_label) {
        if (std::count(leg_label.begin(), leg_label.end(), l) == 1) {
            t.labels.push_back(l);
        }
    }
    t.data.assign(std::size_t{1} << t.labels.size(), Complex(0));
    std::size_t legs = leg_label.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << legs); ++bits) {
        bool consistent = true;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < legs && consistent; ++i) {
            for (std::size_t j = i + 1; j < legs; ++j) {
                if (leg_label[i] == leg_label[j] && ((bits >> i) & 1U) != ((bits >> j) & 1U)) {
                    consistent = false;
                    break;
                }
            }
            auto pos = std::find(t.labels.begin(), t.labels.end(), leg_label[i]);
            if (pos != t.labels.end() && ((bits >> i) & 1U)) {
                idx |= std::size_t{1} << static_cast<std::size_t>(pos - t.labels.begin());
            }
        }
        if (consistent) {
            t.data[idx] += generator_entry(d.node(v), bits, legs);
        }
    }
    return t;
}

inline bool is_input_leg(const std::string &name) {
    return name == "in" || (name.size() > 3 && name.compare(name.size() - 3, 3, "_in") == 0);
}

}  // namespace detail

/// Dense linear map of a diagram. Boundaries are sorted by name; legs named `in` or `*_in` index
/// columns, the rest index rows. Without such names the first half of the legs index rows.
inline ComplexMatrix tensor(const Diagram &d) {
    std::vector<NodeIndex> bnd = d.boundaries();
    if (bnd.size() > kMaxTensorBoundaries) {
        throw ResourceLimit("tensor: more than " + std::to_string(kMaxTensorBoundaries) + " boundaries");
    }
    if (d.wire_count() > kMaxTensorWires) {
        throw ResourceLimit("tensor: more than " + std::to_string(kMaxTensorWires) + " wires");
    }
    d.validate();
    auto inc = d.incidence();
    const int open_base = static_cast<int>(d.wire_count());
    std::vector<detail::LabeledTensor> pool;
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        if (d.node(v).is_boundary()) {
            continue;
        }
        pool.push_back(detail::node_tensor(d, v, inc[v]));
    }
    for (std::size_t k = 0; k < bnd.size(); ++k) {
        detail::LabeledTensor id;
        id.labels = {open_base + static_cast<int>(k), static_cast<int>(inc[bnd[k]][0] >> 1)};
        id.data = {1, 0, 0, 1};
        pool.push_back(std::move(id));
    }
    if (pool.empty()) {
        pool.push_back({{}, {Complex(1)}});
    }
    // Eliminate wires one at a time, choosing the merge with the smallest result rank.
    auto is_open = [&](int l) { return l >= open_base; };
    for (;;) {
        std::size_t best_i = 0;
        std::size_t best_j = 0;
        std::size_t best_rank = SIZE_MAX;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                std::size_t shared = 0;
                for (int l : pool[i].labels) {
                    shared += !is_open(l) &&
                              std::find(pool[j].labels.begin(), pool[j].labels.end(), l) != pool[j].labels.end();
                }
                if (shared == 0) {
                    continue;
                }
                std::size_t rank = pool[i].labels.size() + pool[j].labels.size() - 2 * shared;
                if (rank < best_rank) {
                    best_rank = rank;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_rank == SIZE_MAX) {
            break;
        }
        detail::LabeledTensor merged = detail::contract_pair(pool[best_i], pool[best_j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_j));
        pool[best_i] = std::move(merged);
    }
    // Remaining tensors share no wires: take their outer product.
    detail::LabeledTensor all = pool[0];
    for (std::size_t i = 1; i < pool.size(); ++i) {
        all = detail::contract_pair(all, pool[i]);
    }

    ComplexMatrix m;
    std::vector<std::size_t> row_k;
    std::vector<std::size_t> col_k;
    bool named_inputs = std::any_of(bnd.begin(), bnd.end(),
                                    [&](NodeIndex b) { return detail::is_input_leg(d.node(b).name); });
    for (std::size_t k = 0; k < bnd.size(); ++k) {
        bool input = named_inputs ? detail::is_input_leg(d.node(bnd[k]).name) : k >= (bnd.size() + 1) / 2;
        (input ? col_k : row_k).push_back(k);
        (input ? m.col_legs : m.row_legs).push_back(d.node(bnd[k]).name);
    }
    m.rows = std::size_t{1} << row_k.size();
    m.cols = std::size_t{1} << col_k.size();
    m.data.assign(m.rows * m.cols, Complex(0));
    std::vector<std::size_t> bit_of_leg(bnd.size());
    for (std::size_t k = 0; k < bnd.size(); ++k) {
        bit_of_leg[k] = static_cast<std::size_t>(
            std::find(all.labels.begin(), all.labels.end(), open_base + static_cast<int>(k)) - all.labels.begin());
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            std::size_t flat = 0;
            for (std::size_t i = 0; i < row_k.size(); ++i) {
                if ((r >> (row_k.size() - 1 - i)) & 1U) {
                    flat |= std::size_t{1} << bit_of_leg[row_k[i]];
                }
            }
            for (std::size_t i = 0; i < col_k.size(); ++i) {
                if ((c >> (col_k.size() - 1 - i)) & 1U) {
                    flat |= std::size_t{1} << bit_of_leg[col_k[i]];
                }
            }
            m.at(r, c) = all.data[flat];
        }
    }
    return m;
}

/// True if m1 = c * m2 for some nonzero c, within tol relative to the largest entry of m1.
inline bool equal_up_to_scalar(const ComplexMatrix &m1, const ComplexMatrix &m2, double tol = 1e-9) {
    if (m1.rows != m2.rows || m1.cols != m2.cols) {
        throw std::invalid_argument("equal_up_to_scalar: dimension mismatch");
    }
    std::size_t k = 0;
    double max1 = 0;
    double max2 = 0;
    for (std::size_t i = 0; i < m1.data.size(); ++i) {
        if (std::abs(m1.data[i]) > max1) {
            max1 = std::abs(m1.data[i]);
            k = i;
        }
        max2 = std::max(max2, std::abs(m2.data[i]));
    }
    if (max1 <= tol && max2 <= tol) {
        return true;
    }
    if (max1 <= tol || max2 <= tol || std::abs(m2.data[k]) <= tol * max2) {
        return false;
    }
    Complex c = m1.data[k] / m2.data[k];
    for (std::size_t i = 0; i < m1.data.size(); ++i) {
        if (std::abs(m1.data[i] - c * m2.data[i]) > tol * max1) {
            return false;
        }
    }
    return true;
}

inline std::string format_complex(Complex z) {
    auto clean = [](double x) { return std::abs(x) < 1e-12 ? 0.0 : x; };
    double re = clean(z.real());
    double im = clean(z.imag());
    char buf[64];
    if (im == 0) {
        std::snprintf(buf, sizeof buf, "%.6g", re);
    } else if (re == 0) {
        std::snprintf(buf, sizeof buf, "%.6gi", im);
    } else {
        std::snprintf(buf, sizeof buf, "%.6g%+.6gi", re, im);
    }
    return buf;
}

inline std::ostream &operator<<(std::ostream &os, const ComplexMatrix &m) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            os << (c ? " " : "") << format_complex(m.at(r, c));
        }
        os << '\n';
    }
    return os;
}

}  // namespace zxforge
