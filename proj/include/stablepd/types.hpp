#pragma once

#include "stablepd/field.hpp"
#include "stablepd/persistence.hpp"
#include "stablepd/vineyard.hpp"

namespace stablepd {

// Concrete types used by the file formats and the command line. Nine
// significant digits round-trip a float exactly.
using Real = float;
using Field = ScalarField<Real>;
using Pyramid = ScalePyramid<Real>;
using Point = PersistencePoint<Real>;
using Diagram = PersistenceDiagram<Real>;
using DiagramVine = Vine<Real>;
using Stable = StableDiagram<Real>;

}  // namespace stablepd
