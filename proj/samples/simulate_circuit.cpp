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

// Computes an outcome probability with the phase-space simulator and the
// dense state-vector oracle. Usage: sample_simulate_circuit [circuit-file]

#include <fstream>
#include <iostream>
#include <sstream>

#include "wwm/wwm_simulator.hpp"

int main(int argc, char **argv) {
    using namespace wwm;
    std::string text = "3 2 3\nC 1 2 1\nC 2 3 2\nP 3 1\n";
    if (argc > 1) {
        std::ifstream in(argv[1]);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    auto c = parse_circuit(text);
    auto a = simulate_wwm(c);
    auto b = simulate_dense(c);
    std::cout << c.str() << "phase space: " << a.p << " (" << a.terms_evaluated << " terms)\n"
              << "dense:       " << b.p << '\n'
              << (a.exact == b.exact ? "exact match" : "MISMATCH") << '\n';
    return a.exact == b.exact ? 0 : 1;
}
