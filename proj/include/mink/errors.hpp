#ifndef MINK_ERRORS_HPP_
#define MINK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mink {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad frame, boundary point, malformed input).
class InvalidArgument : public Error {
public:
	using Error::Error;
};

/// A point lies on (or within tolerance of) a weighted leaf.
class OnLeafError : public Error {
public:
	using Error::Error;
};

/// Hessian determinant non-positive where strict convexity is required.
class DegeneracyError : public Error {
public:
	using Error::Error;
};

/// Evaluation outside the domain of a closed-form family.
class DomainError : public Error {
public:
	using Error::Error;
};

/// Newton iteration stalled or ran out of iterations.
class ConvergenceError : public Error {
public:
	using Error::Error;
};

/// Input file could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
public:
	ParseError(const std::string& what, int line)
		: Error(what), line_(line) {}
	int line() const noexcept { return line_; }

private:
	int line_;
};

}  // namespace mink

#endif  // MINK_ERRORS_HPP_
