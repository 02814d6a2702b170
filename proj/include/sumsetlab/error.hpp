#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumsetlab {

/// Error categories raised by the library. The CLI maps each to an exit code.
enum class Errc {
    InvalidArgument,
    ParseError,
    DivisionByZero,
    CapExceeded,
    DegenerateInput,
    BudgetExceeded,
    UnsupportedDegree,
    ZeroPolynomial,
    EmptyGraph,
    EmptyInput,
    EmptySet,
    ZeroElement,
    TooSmall,
    BlockMismatch,
    Infeasible,
    RetriesExhausted,
    HypothesisViolated,
    StageFailed,
    StepBudgetExhausted,
};

constexpr std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::UnsupportedDegree: return "UnsupportedDegree";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptySet: return "EmptySet";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::TooSmall: return "TooSmall";
    case Errc::BlockMismatch: return "BlockMismatch";
    case Errc::Infeasible: return "Infeasible";
    case Errc::RetriesExhausted: return "RetriesExhausted";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::StageFailed: return "StageFailed";
    case Errc::StepBudgetExhausted: return "StepBudgetExhausted";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what)
    {
    }

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; } // message without the code prefix

private:
    Errc code_;
    std::string detail_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace sumsetlab
