#pragma once

#include "numstab/kernels/cholesky.hpp"
#include "numstab/kernels/cosine.hpp"
#include "numstab/kernels/higher_order.hpp"
#include "numstab/kernels/logits.hpp"
#include "numstab/kernels/lu.hpp"
#include "numstab/kernels/remainder.hpp"
#include "numstab/kernels/sampling.hpp"
#include "numstab/kernels/search.hpp"
#include "numstab/kernels/softmax.hpp"
#include "numstab/kernels/summation.hpp"
#include "numstab/kernels/sync_bn.hpp"
