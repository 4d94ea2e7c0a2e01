#ifndef QSPKIT_QSPKIT_HPP
#define QSPKIT_QSPKIT_HPP

#include "qspkit/bench.hpp"
#include "qspkit/completion.hpp"
#include "qspkit/convention.hpp"
#include "qspkit/decomposition.hpp"
#include "qspkit/laurent.hpp"
#include "qspkit/methods.hpp"
#include "qspkit/metrics.hpp"
#include "qspkit/numlin.hpp"
#include "qspkit/optimize.hpp"
#include "qspkit/qspmodel.hpp"
#include "qspkit/sequence_io.hpp"
#include "qspkit/specialfn.hpp"
#include "qspkit/target.hpp"

#endif
