#include "cellbench/core/errors.hpp"

namespace cellbench {

const char *to_string(DataErrorCode code) {
    switch (code) {
    case DataErrorCode::Generic: return "data";
    case DataErrorCode::MissingFile: return "missing-file";
    case DataErrorCode::BadFormat: return "bad-format";
    case DataErrorCode::UnsupportedVersion: return "unsupported-version";
    case DataErrorCode::CountMismatch: return "count-mismatch";
    case DataErrorCode::DimMismatch: return "dim-mismatch";
    case DataErrorCode::PayloadSize: return "payload-size";
    case DataErrorCode::NonFinite: return "non-finite";
    case DataErrorCode::DuplicateId: return "duplicate-id";
    case DataErrorCode::MissingKey: return "missing-key";
    case DataErrorCode::UnresolvedIds: return "unresolved-ids";
    case DataErrorCode::MissingControls: return "missing-controls";
    case DataErrorCode::DegenerateInput: return "degenerate-input";
    }
    return "data";
}

} // namespace cellbench
