#pragma once

#include <stdexcept>
#include <string>

namespace vgroup {

// Base of every error raised by the library. Subclasses map one-to-one onto
// the failure modes callers are expected to distinguish.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define VGROUP_DEFINE_ERROR(Name)                  \
    class Name : public Error {                    \
    public:                                        \
        using Error::Error;                        \
    }

VGROUP_DEFINE_ERROR(MalformedInput);
VGROUP_DEFINE_ERROR(EmptyDocument);
VGROUP_DEFINE_ERROR(EmptySubset);
VGROUP_DEFINE_ERROR(UnknownNode);
VGROUP_DEFINE_ERROR(ParseError);
VGROUP_DEFINE_ERROR(ValidationError);
VGROUP_DEFINE_ERROR(SamplingExhausted);
VGROUP_DEFINE_ERROR(NonFiniteLoss);
VGROUP_DEFINE_ERROR(FormatError);
VGROUP_DEFINE_ERROR(UnknownSubset);
VGROUP_DEFINE_ERROR(SubsetNotNested);
VGROUP_DEFINE_ERROR(LeafSetMismatch);
VGROUP_DEFINE_ERROR(InvalidSpec);
VGROUP_DEFINE_ERROR(EmptyScribble);
VGROUP_DEFINE_ERROR(EmptyGroup);
VGROUP_DEFINE_ERROR(InvalidConfig);

#undef VGROUP_DEFINE_ERROR

} // namespace vgroup
