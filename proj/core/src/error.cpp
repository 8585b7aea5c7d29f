// Copyright 2026 The vtcamo Authors
#include "vtcamo/error.hpp"

namespace vtcamo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return "invalid_parameter";
    case ErrorKind::kUnsupportedFunction: return "unsupported_function";
    case ErrorKind::kMalformedConfig: return "malformed_config";
    case ErrorKind::kIndistinguishable: return "indistinguishable";
    case ErrorKind::kSyntax: return "syntax";
    case ErrorKind::kUndefinedNet: return "undefined_net";
    case ErrorKind::kCycle: return "cycle";
    case ErrorKind::kArityMismatch: return "arity_mismatch";
    case ErrorKind::kDuplicateDefinition: return "duplicate_definition";
    case ErrorKind::kUnresolvedGate: return "unresolved_gate";
    case ErrorKind::kInvalidInput: return "invalid_input";
    case ErrorKind::kIncompatibleNetlists: return "incompatible_netlists";
    case ErrorKind::kContentionCollapse: return "contention_collapse";
    case ErrorKind::kDecoyUnavailable: return "decoy_unavailable";
    case ErrorKind::kInvalidConfig: return "invalid_config";
    case ErrorKind::kAttackTooLarge: return "attack_too_large";
    case ErrorKind::kDependency: return "dependency";
    case ErrorKind::kInvalidTemplate: return "invalid_template";
    case ErrorKind::kInsertion: return "insertion";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace vtcamo
