// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pave {

/// Base class for all pave errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file or reply text.
struct ParseError : Error {
    using Error::Error;
};

/// Structurally valid input that violates a domain invariant
/// (dangling edge endpoint, nonpositive length, ...). The message
/// names the offending record.
struct ValidationError : Error {
    using Error::Error;
};

/// A node id that does not exist in the graph.
struct UnknownNodeError : Error {
    using Error::Error;
};

/// No path exists between the requested endpoints.
struct NoPathError : Error {
    using Error::Error;
};

struct EmptyGraphError : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// A caller-side precondition was violated before any work ran.
struct PreconditionError : Error {
    using Error::Error;
};

/// LLM reply failed schema validation after all retries. Carries the
/// last raw reply for debugging.
struct SchemaError : Error {
    SchemaError(const std::string& msg, std::string raw_reply)
        : Error(msg), raw_reply(std::move(raw_reply)) {}
    std::string raw_reply;
};

/// REPLAY backend has no fixture for the request hash.
struct MissingFixtureError : Error {
    MissingFixtureError(const std::string& msg, std::string request_hash)
        : Error(msg), request_hash(std::move(request_hash)) {}
    std::string request_hash;
};

/// HTTP backend transport failure (after retries).
struct TransportError : Error {
    using Error::Error;
};

/// A prompt template slot had no value in the render context.
struct MissingSlotError : Error {
    using Error::Error;
};

/// A schema-valid decision that references unknown routes or POIs.
struct InvalidDecisionError : Error {
    using Error::Error;
};

struct WriteError : Error {
    using Error::Error;
};

/// Wraps an error from a pipeline stage with the stage name.
struct StageError : Error {
    StageError(std::string stage_name, const std::string& msg)
        : Error("stage " + stage_name + ": " + msg), stage(std::move(stage_name)) {}
    std::string stage;
};

}  // namespace pave
