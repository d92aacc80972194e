#ifndef QWALK_QWALK_HPP
#define QWALK_QWALK_HPP

#include "qwalk/linalg.hpp"
#include "qwalk/walk.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/criteria.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/eigenspace.hpp"
#include "qwalk/deformation.hpp"
#include "qwalk/document.hpp"

#endif  // QWALK_QWALK_HPP
