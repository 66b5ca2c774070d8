#pragma once

#include "psdns/bench.hpp"
#include "psdns/cases.hpp"
#include "psdns/checkpoint.hpp"
#include "psdns/comm.hpp"
#include "psdns/diagnostics.hpp"
#include "psdns/fft.hpp"
#include "psdns/field.hpp"
#include "psdns/kernels.hpp"
#include "psdns/layout.hpp"
#include "psdns/mesh.hpp"
#include "psdns/run.hpp"
#include "psdns/solver.hpp"
