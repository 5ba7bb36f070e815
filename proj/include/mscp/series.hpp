#pragma once

#include <vector>

namespace mscp {

// An observed univariate sequence, optionally annotated with the true
// change set (data indices, 1-based: a change at c means the law switches
// between index c and c+1).
struct Series {
    std::vector<double> values;
    std::vector<int> truth; // empty when unknown

    int size() const { return static_cast<int>(values.size()); }
};

} // namespace mscp
