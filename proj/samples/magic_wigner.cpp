// Copyright 2026 The wwmsim Authors
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

// Prints the Wigner function of one |T> qutrit and its negativity.

#include <cmath>
#include <cstdio>

#include "wwm/phasespace.hpp"

int main() {
    using namespace wwm;
    const Modulus md = Modulus::checked(3, 2);
    auto psi = magic_state_vector(1, md);
    auto W = weyl_symbol(outer(psi, psi), 1, ExactOps{md});
    double neg = 0;
    for (uint64_t i = 0; i < 9; i++) {
        auto x = PhasePoint::from_index(i, 1, 3);
        std::printf("xp=%lld xq=%lld  W=% .6f  exact=%s\n", (long long)x.xp[0], (long long)x.xq[0], W.values[i],
                    W.exact[i].str().c_str());
        neg += std::fabs(W.values[i]);
    }
    std::printf("negativity %.5f\n", neg);
}
