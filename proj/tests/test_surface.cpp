#include <doctest.h>

#include "speclab/library.hpp"
#include "speclab/surface.hpp"

using namespace speclab;

TEST_CASE("surface smoke") {
    for (const auto& label : builtin_labels()) {
        CAPTURE(label);
        auto c = build_surface(load_instance(label));
        CHECK(c.num_branch() == c.counts.branch_points);
        CHECK(static_cast<int>(c.zeros.size()) == c.counts.zeros);
        // each lasso monodromy swaps the two sheets; product is the identity
        std::vector<int> prod = {0, 1};
        for (const auto& m : c.monodromy) {
            CHECK(m == std::vector<int>{1, 0});
            std::vector<int> next(2);
            for (int s = 0; s < 2; ++s) next[s] = m[prod[s]];
            prod = next;
        }
        CHECK(prod == std::vector<int>{0, 1});
        // the + lift around each lasso circle returns with w negated
        for (int k = 0; k < c.num_branch(); ++k)
            CHECK(std::abs(c.circles[k].w_end + c.legs[k].w_end) < 1e-12 * std::abs(c.legs[k].w_end));
    }
}
