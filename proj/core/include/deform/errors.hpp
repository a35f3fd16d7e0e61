#ifndef DEFORM_ERRORS_HPP
#define DEFORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace deform {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error("ShapeMismatch: " + msg) {}
};
struct NotAComplex : Error {
    explicit NotAComplex(const std::string& msg) : Error("NotAComplex: " + msg) {}
};
struct UnknownLabel : Error {
    explicit UnknownLabel(const std::string& msg) : Error("UnknownLabel: " + msg) {}
};
struct BaseMismatch : Error {
    explicit BaseMismatch(const std::string& msg) : Error("BaseMismatch: " + msg) {}
};
struct CarrierMismatch : Error {
    explicit CarrierMismatch(const std::string& msg) : Error("CarrierMismatch: " + msg) {}
};
struct DegreeError : Error {
    explicit DegreeError(const std::string& msg) : Error("DegreeError: " + msg) {}
};
struct BadParams : Error {
    explicit BadParams(const std::string& msg) : Error("BadParams: " + msg) {}
};
struct NotFirstOrderMC : Error {
    explicit NotFirstOrderMC(const std::string& msg) : Error("NotFirstOrderMC: " + msg) {}
};
struct UnsupportedOrder : Error {
    explicit UnsupportedOrder(const std::string& msg) : Error("UnsupportedOrder: " + msg) {}
};
struct InvalidSc : Error {
    explicit InvalidSc(const std::string& msg) : Error("InvalidSc: " + msg) {}
};
struct Unsupported : Error {
    explicit Unsupported(const std::string& msg) : Error("Unsupported: " + msg) {}
};
struct BadWindow : Error {
    explicit BadWindow(const std::string& msg) : Error("BadWindow: " + msg) {}
};
struct WindowOverflow : Error {
    explicit WindowOverflow(const std::string& msg) : Error("WindowOverflow: " + msg) {}
};
struct WindowUnstable : Error {
    explicit WindowUnstable(const std::string& msg) : Error("WindowUnstable: " + msg) {}
};
struct CoverMismatch : Error {
    explicit CoverMismatch(const std::string& msg) : Error("CoverMismatch: " + msg) {}
};
struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& msg) : Error("HypothesisViolated: " + msg) {}
};
struct KTooLarge : Error {
    explicit KTooLarge(const std::string& msg) : Error("KTooLarge: " + msg) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("ParseError: " + msg) {}
};
struct UnknownCheck : Error {
    explicit UnknownCheck(const std::string& msg) : Error("UnknownCheck: " + msg) {}
};
struct InternalCheckFailure : Error {
    explicit InternalCheckFailure(const std::string& msg) : Error("InternalCheckFailure: " + msg) {}
};

} // namespace deform

#endif
