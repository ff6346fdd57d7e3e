#ifndef DTCWTMARK_ERRORS_HPP
#define DTCWTMARK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtcwtmark {

/// Malformed input stream (bad header token, unknown tag).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stream ended in the middle of a frame payload.
class TruncationError : public std::runtime_error {
public:
    TruncationError(std::size_t frame_index, const std::string& what)
        : std::runtime_error(what), frame_index_(frame_index) {}

    std::size_t frame_index() const noexcept { return frame_index_; }

private:
    std::size_t frame_index_;
};

/// Pyramid levels with inconsistent sizes.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Frame whose candidate curve has (near) zero mean and cannot carry a bit.
class UnembeddableFrame : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dtcwtmark

#endif  // DTCWTMARK_ERRORS_HPP
