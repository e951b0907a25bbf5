#pragma once

#include <vector>

namespace vecgp {

// One labeled data point. Class 0 is the "first" class of the decision rule:
// a program output >= 0 predicts it.
struct Sample {
    std::vector<double> features;
    int label = 0;
};

} // namespace vecgp
