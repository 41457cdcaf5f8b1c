#include "cellbench/core/folds.hpp"

namespace cellbench {

std::vector<std::string> FoldSpec::members(int fold) const {
    std::vector<std::string> out;
    for (const auto &[id, f] : fold_of)
        if (f == fold)
            out.push_back(id);
    return out;
}

} // namespace cellbench
