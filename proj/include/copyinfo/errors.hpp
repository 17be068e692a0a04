#pragma once

#include <stdexcept>
#include <string>

namespace copyinfo {

/// Base class for all library errors. `name()` is a stable machine-readable
/// identifier, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define COPYINFO_ERROR(NAME)                                                  \
    class NAME : public Error {                                              \
    public:                                                                  \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}       \
    }

// prob_core
COPYINFO_ERROR(NegativeWeight);
COPYINFO_ERROR(NotNormalized);
COPYINFO_ERROR(DuplicateLabel);
COPYINFO_ERROR(AlphabetMismatch);
COPYINFO_ERROR(OutOfRange);

// copy_decomp
COPYINFO_ERROR(SymbolNotInAlphabet);
COPYINFO_ERROR(IndeterminateInfinity);
COPYINFO_ERROR(NonSquareChannel);
COPYINFO_ERROR(AlphaOutOfRange);
COPYINFO_ERROR(DegeneratePrior);

// gen_copy
COPYINFO_ERROR(NegativeLambda);
COPYINFO_ERROR(AlphabetTooLarge);
COPYINFO_ERROR(NonNumericLabels);

// channel_synthesis
COPYINFO_ERROR(ZeroMultiplier);
COPYINFO_ERROR(GammaOutOfRange);
COPYINFO_ERROR(TargetAboveEntropy);
COPYINFO_ERROR(SourceNotFullSupport);
COPYINFO_ERROR(NoSolution);

// pam_pipeline
COPYINFO_ERROR(MalformedMatrix);
COPYINFO_ERROR(BadFrequencyCount);
COPYINFO_ERROR(NegativeEntry);
COPYINFO_ERROR(NumericalBlowup);
COPYINFO_ERROR(ReducibleChain);
COPYINFO_ERROR(LengthMismatch);
COPYINFO_ERROR(DegenerateVariance);

#undef COPYINFO_ERROR

}  // namespace copyinfo
