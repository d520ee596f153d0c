#include "codecstream/error.hpp"

namespace codecstream {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::malformed_record:    return "MalformedRecord";
        case ErrorKind::non_monotonic_pts:   return "NonMonotonicPts";
        case ErrorKind::dimension_mismatch:  return "DimensionMismatch";
        case ErrorKind::empty_trace:         return "EmptyTrace";
        case ErrorKind::invalid_spec:        return "InvalidSpec";
        case ErrorKind::out_of_range:        return "OutOfRange";
        case ErrorKind::mask_too_large:      return "MaskTooLarge";
        case ErrorKind::empty_ground_truth:  return "EmptyGroundTruth";
        case ErrorKind::no_timestamps_found: return "NoTimestampsFound";
        case ErrorKind::invalid_config:      return "InvalidConfig";
        case ErrorKind::io_failure:          return "IoFailure";
        case ErrorKind::internal:            return "Internal";
    }
    return "Unknown";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::malformed_record:
        case ErrorKind::non_monotonic_pts:
        case ErrorKind::dimension_mismatch:
        case ErrorKind::empty_trace:
        case ErrorKind::out_of_range:
        case ErrorKind::empty_ground_truth:
        case ErrorKind::no_timestamps_found:
        case ErrorKind::io_failure:
            return 2;
        case ErrorKind::invalid_spec:
        case ErrorKind::invalid_config:
        case ErrorKind::mask_too_large:
            return 3;
        case ErrorKind::internal:
            return 4;
    }
    return 4;
}

}  // namespace codecstream
