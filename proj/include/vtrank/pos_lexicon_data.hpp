/*
 * Copyright 2026 The vtrank Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Bundled English lexicon: each word is listed under its most frequent tag in ad copy.

namespace vtrank::lexicon_data {

inline constexpr const char *other_words = R"(
a an the this that these those some any each every all both either neither no
i me my mine myself you your yours yourself yourselves he him his himself she her hers herself
it its itself we us our ours ourselves they them their theirs themselves
who whom whose which what whatever whoever whichever
and or but nor so yet for because although though while whereas if unless until since
as than whether
about above across after against along amid among around at before behind below beneath
beside besides between beyond by despite down during except from in inside into like near
of off on onto out outside over past per through throughout to toward towards under
underneath unlike up upon via with within without
is am are was were be been being do does did done doing have has had having
will would shall should can could may might must ought
not never also just only even still already very too quite rather really almost
now then here there today tomorrow tonight yesterday soon later again ever always often
sometimes usually once twice away back forward together instead perhaps maybe
how why when where
more most less least much many few several such same other another own
new old good great best better top big small large little high low long short free
fast quick quickly easy easily simple hard early late full real sure true whole
hot cold warm cool fresh clean safe secure private local global online offline
asian american european african latin modern classic affordable exclusive
official certified professional premium luxury cheap unique special perfect beautiful
amazing awesome incredible stunning gorgeous elegant stylish comfortable durable
available possible ready open closed latest popular favorite favourite
first second third last next final main major minor key
one two three four five six seven eight nine ten hundred thousand million billion
yes no ok okay please thanks thank

don't doesn't didn't can't won't isn't aren't wasn't weren't haven't hasn't
you're you'll you've we're we'll they're it's that's there's let's i'm i've
)";

inline constexpr const char *verb_words = R"(
sell buy get find save shop order book call visit try start learn discover explore
need want make take give go come see look know think feel help keep let put run
use work play live move stay travel drive fly ride walk eat drink cook build create
design grow earn win join sign apply compare choose pick enjoy love like hate
rent lease hire pay borrow lend invest refinance repair fix clean install upgrade
download stream watch listen read write speak call text chat meet date
protect stop prevent avoid reduce lose burn boost improve increase lower cut
check click subscribe register enroll donate support share follow connect
ship deliver offer treat cure heal relax sleep
sells buys gets finds saves shops orders books calls visits starts learns makes
takes gives goes comes sees looks knows helps keeps runs uses works plays lives
moves travels drives builds creates designs grows earns wins joins
selling buying getting finding saving shopping ordering booking calling visiting
starting learning making taking giving going coming seeing looking knowing helping
sold bought got found saved made took gave went came saw looked knew helped
)";

inline constexpr const char *noun_words = R"(
store shop mall market marketplace outlet boutique brand brands company
business service services product products deal deals offer offers discount discounts
price prices sale sales coupon coupons gift gifts order shipping delivery
furniture antique antiques vintage decor chair chairs table tables sofa couch bed beds
desk lamp rug carpet shelf cabinet dresser mattress pillow curtain kitchen bathroom
bedroom living room home homes house houses apartment apartments condo property
properties realtor realtors estate mortgage loan loans rent foreclosure homeowner
homeowners garden yard lawn pool roof window windows door doors floor flooring wall
car cars truck trucks vehicle vehicles suv auto autos tire tires engine insurance
bank banking money cash credit card cards debt tax taxes account accounts investment
stock stocks crypto bitcoin finance savings retirement budget
job jobs career careers degree degrees school schools college university course courses
class classes training student students teacher education
doctor doctors health healthcare hospital clinic dentist dental medicine pill pills
drug drugs therapy treatment treatments cancer diabetes skin hair weight diet fitness
gym yoga workout exercise nutrition vitamin vitamins supplement supplements
food foods pizza burger coffee tea wine beer restaurant restaurants recipe recipes
meal meals snack snacks chocolate cake fruit vegetables organic
travel trip trips vacation vacations hotel hotels flight flights cruise beach resort
island mountain city cities tour tours ticket tickets
phone phones laptop laptops computer computers tablet software app apps game games
camera cameras headphones tv television device devices internet wifi
fashion clothing clothes dress dresses shirt shirts shoes shoe sneakers jacket jeans
jewelry ring rings necklace watch watches bag bags handbag handbags
baby babies kid kids child children toy toys family mom dad parent parents pet pets
dog dogs cat cats puppy wedding weddings party parties flower flowers
music movie movies book books art photo photos video videos event events concert
lawyer lawyers attorney attorneys law legal court injury accident divorce
people person man men woman women customer customers user users team
time day days week weeks month months year years hour hours minute minutes
today's way world life water energy solar power light style styles quality
design designs collection collections selection item items size sizes color colors
tool tools equipment machine machines paint plant plants tree trees
website site page news guide tips tip idea ideas solution solutions plan plans
decoration decorations bedding towel towels
)";

inline constexpr const char *propn_words = R"(
amazon google facebook apple microsoft walmart target ebay
)";

} // namespace vtrank::lexicon_data
