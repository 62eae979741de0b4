#pragma once

#include <stdexcept>
#include <string>

namespace ipsae {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define IPSAE_DEFINE_ERROR(Name)                    \
    class Name : public Error {                     \
    public:                                         \
        using Error::Error;                         \
    }

// linalg
IPSAE_DEFINE_ERROR(DimensionMismatch);
IPSAE_DEFINE_ERROR(NotSquare);
IPSAE_DEFINE_ERROR(NotSymmetric);
IPSAE_DEFINE_ERROR(NonFinite);
IPSAE_DEFINE_ERROR(TooLarge);
IPSAE_DEFINE_ERROR(SingularSystem);
IPSAE_DEFINE_ERROR(SingularNormalEquations);
IPSAE_DEFINE_ERROR(NotSpd);
IPSAE_DEFINE_ERROR(ZeroMatrix);
IPSAE_DEFINE_ERROR(NoConvergence);

// data
IPSAE_DEFINE_ERROR(MissingFile);
IPSAE_DEFINE_ERROR(FormatError);
IPSAE_DEFINE_ERROR(InvariantViolation);
IPSAE_DEFINE_ERROR(IoError);
IPSAE_DEFINE_ERROR(EmptyClass);
IPSAE_DEFINE_ERROR(BadThreshold);
IPSAE_DEFINE_ERROR(IndexOutOfRange);
IPSAE_DEFINE_ERROR(EmptySeenClass);
IPSAE_DEFINE_ERROR(InfeasibleConfig);

// model
IPSAE_DEFINE_ERROR(NonPositiveLambda);
IPSAE_DEFINE_ERROR(UnseenLabelInTraining);

// eval
IPSAE_DEFINE_ERROR(LengthMismatch);
IPSAE_DEFINE_ERROR(EmptyCandidates);
IPSAE_DEFINE_ERROR(EmptyMatrix);
IPSAE_DEFINE_ERROR(SingleClass);

#undef IPSAE_DEFINE_ERROR

}  // namespace ipsae
