#pragma once
// Exception hierarchy shared by every scirec module. All errors derive from
// scirec::Error so callers (CLI, service) can map them to exit codes / HTTP
// statuses in one place.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace scirec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ": " + reason), line_(line) {}
    explicit ParseError(const std::string& reason) : Error("parse error: " + reason) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& reason, std::vector<std::string> offenders)
        : Error(compose(reason, offenders)), offenders_(std::move(offenders)) {}
    const std::vector<std::string>& offenders() const { return offenders_; }

private:
    static std::string compose(const std::string& reason, const std::vector<std::string>& offenders) {
        std::string msg = "validation error: " + reason;
        if (!offenders.empty()) {
            msg += ": ";
            for (std::size_t i = 0; i < offenders.size(); ++i) {
                if (i) msg += ", ";
                msg += offenders[i];
            }
        }
        return msg;
    }
    std::vector<std::string> offenders_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

// Lookup failures. The CLI maps all of these to exit code 4.
class UnknownEntity : public Error {
public:
    using Error::Error;
};

class UnknownPaper : public UnknownEntity {
public:
    explicit UnknownPaper(const std::string& id) : UnknownEntity("unknown paper: " + id) {}
};

class UnknownKeyword : public UnknownEntity {
public:
    explicit UnknownKeyword(const std::string& id) : UnknownEntity("unknown keyword: " + id) {}
};

class UnknownState : public UnknownEntity {
public:
    explicit UnknownState(const std::string& what) : UnknownEntity("unknown state: " + what) {}
};

class InvalidWeights : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

// The estimator is undefined because the conditioning event never occurred
// in the sample. Distinct from an estimate of zero.
class InsufficientSupport : public Error {
public:
    using Error::Error;
};

class MismatchedKeys : public Error {
public:
    using Error::Error;
};

class DegenerateInput : public Error {
public:
    using Error::Error;
};

}  // namespace scirec
