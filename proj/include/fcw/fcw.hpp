#pragma once

#include "fcw/baker.hpp"
#include "fcw/calogero_moser.hpp"
#include "fcw/diffop.hpp"
#include "fcw/grassmannian.hpp"
#include "fcw/io.hpp"
#include "fcw/mad.hpp"
#include "fcw/operator_space.hpp"
#include "fcw/psdo.hpp"
#include "fcw/scene.hpp"
#include "fcw/verify.hpp"
