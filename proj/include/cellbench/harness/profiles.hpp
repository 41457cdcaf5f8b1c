#pragma once

#include <string>
#include <vector>

#include "cellbench/core/table.hpp"

namespace cellbench::harness {

enum class Centering { None, NegControlPerPlate };
enum class Aggregate { Mean, Median };

Centering parse_centering(const std::string &text);
Aggregate parse_aggregate(const std::string &text);

struct ProfileOptions {
    Centering center = Centering::None;
    Aggregate aggregate = Aggregate::Mean;
    std::string plate_key = "plate";
    std::string control_key = "control";
    std::string negative_value = "negative";
};

/// Subtracts from every row the mean of the negative-control rows on its
/// plate. Works in double; throws DataError(MissingControls) listing every
/// plate without controls.
Matrix center_on_negative_controls(const Matrix &values, const std::vector<std::string> &plate,
                                   const std::vector<bool> &is_negative);
Matrix center_on_negative_controls(const EmbeddingTable &table, const ProfileOptions &options);

/// One row per distinct group_key value, in order of first appearance.
/// Output metadata: the group key, "n_members", and every input key whose
/// value is identical across the group's members.
EmbeddingTable build_profiles(const EmbeddingTable &table, const std::string &group_key,
                              const ProfileOptions &options = {});

} // namespace cellbench::harness
