#ifndef TKDV_ERRORS_HPP
#define TKDV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tkdv
{

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TKDV_DECLARE_ERROR(name)                                                                                       \
    struct name : Error {                                                                                              \
        using Error::Error;                                                                                            \
    }

// Conjugation or division by epsilon left a negative power.
TKDV_DECLARE_ERROR(NotTame);
// Antiderivative requested for a non-exact differential polynomial.
TKDV_DECLARE_ERROR(NotExact);
TKDV_DECLARE_ERROR(JetTooShort);
TKDV_DECLARE_ERROR(ObstructionNotExact);
TKDV_DECLARE_ERROR(CorrectionFailed);
TKDV_DECLARE_ERROR(ResidualNonzero);
TKDV_DECLARE_ERROR(TruncationTooShallow);
TKDV_DECLARE_ERROR(PoleHit);
TKDV_DECLARE_ERROR(Blowup);
TKDV_DECLARE_ERROR(RecursionBroken);

#undef TKDV_DECLARE_ERROR

} // namespace tkdv

#endif
