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

// Histogram of reduced Gauss-sum counts for |T>^3 over all 729 phase points.

#include <iostream>

#include "wwm/rank_counter.hpp"

int main() {
    using namespace wwm;
    auto p = transformed_magic_poly(3);
    auto rep = worst_case_rank(p, RankStrategy::exhaustive(), default_merge_rules(3));
    for (auto [count, points] : rep.histogram) {
        std::cout << count << " sums: " << points << " points\n";
    }
    std::cout << "worst case " << rep.worst_case << '\n';
}
