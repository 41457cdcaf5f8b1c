#pragma once

#include <map>
#include <string>
#include <vector>

namespace cellbench {

// Assignment of selected items to cross-validation folds.
struct FoldSpec {
    std::map<std::string, int> fold_of; // item id -> fold index
    int n_folds = 0;
    std::string scheme;
    std::vector<std::string> warnings;

    // Items of one fold, in id order.
    std::vector<std::string> members(int fold) const;

    friend bool operator==(const FoldSpec &a, const FoldSpec &b) {
        return a.fold_of == b.fold_of && a.n_folds == b.n_folds && a.scheme == b.scheme;
    }
};

} // namespace cellbench
