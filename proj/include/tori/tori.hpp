#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "polynomial.hpp"
#include "algebraic.hpp"
#include "matrix.hpp"
#include "linalg.hpp"
#include "lattice.hpp"
#include "simplex.hpp"
#include "logdet_opt.hpp"
#include "immersion.hpp"
#include "constructions.hpp"
#include "catalog.hpp"
#include "certificate.hpp"
