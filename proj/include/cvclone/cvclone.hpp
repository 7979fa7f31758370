#pragma once

#include "cvclone/errors.hpp"
#include "cvclone/gaussian.hpp"
#include "cvclone/sum1_source.hpp"
#include "cvclone/telecloning.hpp"
#include "cvclone/lcdt.hpp"
#include "cvclone/experiments.hpp"
