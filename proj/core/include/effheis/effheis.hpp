#pragma once

#include "effheis/boson.hpp"
#include "effheis/dynamics.hpp"
#include "effheis/error.hpp"
#include "effheis/fermion.hpp"
#include "effheis/fock.hpp"
#include "effheis/linalg.hpp"
#include "effheis/matrix.hpp"
#include "effheis/perturbation.hpp"
#include "effheis/projector.hpp"
