#pragma once

#include <stdexcept>
#include <string>

namespace builddiff {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// XML input that cannot be parsed at all.
struct MalformedXml : Error {
    using Error::Error;
};

// Document parses but the root element is not <project>.
struct UnexpectedRoot : Error {
    using Error::Error;
};

// An element carries both text content and child elements.
struct MixedContent : Error {
    using Error::Error;
};

// Edit script handed to the classifier is not in top-down order.
struct UnsortedScript : Error {
    using Error::Error;
};

// Path given to the miner is not a git repository.
struct NotARepository : Error {
    using Error::Error;
};

struct HttpError : Error {
    using Error::Error;
};

struct RateLimited : HttpError {
    explicit RateLimited(const std::string& msg, long retry_after_seconds = -1)
        : HttpError(msg), retry_after(retry_after_seconds) {}
    long retry_after; // seconds from the Retry-After header, -1 if absent
};

struct NotFound : HttpError {
    using HttpError::HttpError;
};

} // namespace builddiff
