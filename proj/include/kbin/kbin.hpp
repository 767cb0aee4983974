#pragma once

#include "kbin/ring.hpp"
#include "kbin/matrix.hpp"
#include "kbin/smith.hpp"
#include "kbin/module.hpp"
#include "kbin/complex.hpp"
#include "kbin/multicomplex.hpp"
#include "kbin/random.hpp"
#include "kbin/extension.hpp"
#include "kbin/resolve.hpp"
#include "kbin/kgroups.hpp"
#include "kbin/cofinal.hpp"
#include "kbin/io.hpp"
