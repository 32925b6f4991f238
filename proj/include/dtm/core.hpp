#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dtm {

/// Dense handle for a forest node. Handles of split-created nodes are fresh;
/// a retired handle is never reused for a live node.
using NodeId = std::int64_t;
using EdgeId = std::int64_t;

inline constexpr NodeId kNoNode = -1;

enum class Errc {
    CycleDetected,
    DanglingParent,
    IsRoot,
    DeadNode,
    NotAPathForest,
    DuplicateElement,
    Empty,
    NotPresent,
    AlreadyPresent,
    OutOfOrder,
    ModeMismatch,
    Disconnected,
    TooLarge,
    BadParams,
    OracleMismatch,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::CycleDetected: return "CycleDetected";
        case Errc::DanglingParent: return "DanglingParent";
        case Errc::IsRoot: return "IsRoot";
        case Errc::DeadNode: return "DeadNode";
        case Errc::NotAPathForest: return "NotAPathForest";
        case Errc::DuplicateElement: return "DuplicateElement";
        case Errc::Empty: return "Empty";
        case Errc::NotPresent: return "NotPresent";
        case Errc::AlreadyPresent: return "AlreadyPresent";
        case Errc::OutOfOrder: return "OutOfOrder";
        case Errc::ModeMismatch: return "ModeMismatch";
        case Errc::Disconnected: return "Disconnected";
        case Errc::TooLarge: return "TooLarge";
        case Errc::BadParams: return "BadParams";
        case Errc::OracleMismatch: return "OracleMismatch";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace dtm
