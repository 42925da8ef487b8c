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

#include <gtest/gtest.h>

#include <stdexcept>

#include "zxforge/phase.hpp"

namespace zxforge {
namespace {

TEST(Phase, WrapsIntoRange) {
    EXPECT_EQ(Phase(360).degrees(), 0);
    EXPECT_EQ(Phase(-90).degrees(), 270);
    EXPECT_EQ(Phase(725).degrees(), 5);
    EXPECT_EQ(Phase(-720).degrees(), 0);
}

TEST(Phase, Arithmetic) {
    EXPECT_EQ(Phase(270) + Phase(180), Phase(90));
    EXPECT_EQ(Phase(90) - Phase(180), Phase(270));
    EXPECT_EQ(-Phase(90), Phase(270));
    EXPECT_EQ(-Phase(0), Phase(0));
    Phase p(45);
    p += 330;
    EXPECT_EQ(p.degrees(), 15);
}

TEST(Phase, CliffordClasses) {
    EXPECT_TRUE(Phase(0).is_pauli());
    EXPECT_TRUE(Phase(180).is_pauli());
    EXPECT_FALSE(Phase(90).is_pauli());
    EXPECT_TRUE(Phase(90).is_proper_clifford());
    EXPECT_TRUE(Phase(270).is_proper_clifford());
    EXPECT_FALSE(Phase(45).is_proper_clifford());
    EXPECT_FALSE(Phase(180).is_proper_clifford());
}

TEST(Color, SignRoundTrip) {
    EXPECT_EQ(sign(Color::Z), 1);
    EXPECT_EQ(sign(Color::X), -1);
    EXPECT_EQ(color_from_sign(1), Color::Z);
    EXPECT_EQ(color_from_sign(-1), Color::X);
    EXPECT_EQ(flip(Color::Z), Color::X);
    EXPECT_THROW(color_from_sign(0), std::invalid_argument);
}

TEST(Phase, NegationIsInvolutionProperty) {
    for (int d = -720; d <= 720; d += 15) {
        Phase p(d);
        EXPECT_EQ(-(-p), p);
        EXPECT_EQ(p + (-p), Phase(0));
        EXPECT_GE(p.degrees(), 0);
        EXPECT_LT(p.degrees(), 360);
    }
}

}  // namespace
}  // namespace zxforge
