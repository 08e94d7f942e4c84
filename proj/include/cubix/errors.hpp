#ifndef CUBIX_ERRORS_HPP
#define CUBIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cubix {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CUBIX_DEFINE_ERROR(Name)                                            \
    struct Name : Error {                                                   \
        explicit Name(const std::string& what = #Name) : Error(what) {}     \
    }

CUBIX_DEFINE_ERROR(DivisionByZero);
CUBIX_DEFINE_ERROR(FieldMismatch);
CUBIX_DEFINE_ERROR(NotAnExtension);
CUBIX_DEFINE_ERROR(ZeroElement);
CUBIX_DEFINE_ERROR(FactorizationBoundExceeded);
CUBIX_DEFINE_ERROR(NotTripleRoot);
CUBIX_DEFINE_ERROR(NotDoubleRoot);
CUBIX_DEFINE_ERROR(NotGeneric);
CUBIX_DEFINE_ERROR(NotGenericSquare);
CUBIX_DEFINE_ERROR(NotGenericNonSquare);
CUBIX_DEFINE_ERROR(QMismatch);
CUBIX_DEFINE_ERROR(ZeroCubic);
CUBIX_DEFINE_ERROR(ZeroMatrix);
CUBIX_DEFINE_ERROR(SingularMatrix);
CUBIX_DEFINE_ERROR(NotTraceless);
CUBIX_DEFINE_ERROR(NotSl2);
CUBIX_DEFINE_ERROR(DiscriminantMismatch);
CUBIX_DEFINE_ERROR(MixedStrata);
CUBIX_DEFINE_ERROR(GenericInput);
CUBIX_DEFINE_ERROR(Irreducible);
CUBIX_DEFINE_ERROR(MultipleRoot);
CUBIX_DEFINE_ERROR(FieldTooLarge);
CUBIX_DEFINE_ERROR(NotPrimeField);
CUBIX_DEFINE_ERROR(Unsupported);
CUBIX_DEFINE_ERROR(ParseError);
CUBIX_DEFINE_ERROR(InternalCheckFailure);

#undef CUBIX_DEFINE_ERROR

} // namespace cubix

#endif
