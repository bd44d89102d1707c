#ifndef FORMALIZER_TESTS_FIXTURES_HPP
#define FORMALIZER_TESTS_FIXTURES_HPP

// Frozen copies of the reference BlocksWorld artifacts; tests compare
// toolchain behavior against these exact bytes.

namespace fixtures {

inline const char kBlocksworldDomain[] = R"fx((define (domain blocksworld)
  (:requirements :strips)
(:predicates (clear ?x)
             (on-table ?x)
             (arm-empty)
             (holding ?x)
             (on ?x ?y))

(:action pickup
  :parameters (?ob)
  :precondition (and (clear ?ob) (on-table ?ob) (arm-empty))
  :effect (and (holding ?ob) (not (clear ?ob)) (not (on-table ?ob)) 
               (not (arm-empty))))

(:action putdown
  :parameters  (?ob)
  :precondition (holding ?ob)
  :effect (and (clear ?ob) (arm-empty) (on-table ?ob) 
               (not (holding ?ob))))

(:action stack
  :parameters  (?ob ?underob)
  :precondition (and (clear ?underob) (holding ?ob))
  :effect (and (arm-empty) (clear ?ob) (on ?ob ?underob)
               (not (clear ?underob)) (not (holding ?ob))))

(:action unstack
  :parameters  (?ob ?underob)
  :precondition (and (on ?ob ?underob) (clear ?ob) (arm-empty))
  :effect (and (holding ?ob) (clear ?underob)
               (not (on ?ob ?underob)) (not (clear ?ob)) (not (arm-empty)))))
)fx";

inline const char kBlocksworldP01[] = R"fx((define (problem blocksworld-p01)
  (:domain blocksworld)
  (:objects block1 block2 block3 block4 )
  (:init 
    (on-table block3)
    (clear block3)
    (on-table block4)
    (clear block4)
    (on-table block1)
    (clear block1)
    (on-table block2)
    (clear block2)
    (arm-empty)
  )
  (:goal (and 
    (on-table block4)
    (on-table block2)
    (on-table block1)
    (on-table block3)
  ))
)
)fx";

inline const char kBlocksworldDomainDescription[] = R"fx(I am playing with a set of blocks where I need to arrange the blocks into stacks. Here are the actions I can do

   Pick up a block
   Unstack a block from on top of another block
   Put down a block
   Stack a block on top of another block

   I have the following restrictions on my actions:
   I can only pick up or unstack one block at a time.
   I can only pick up or unstack a block if my hand is empty.
   I can only pick up a block if the block is on the table and the block is clear. A block is clear if the block has no other blocks on top of it and if the block is not picked up.
   I can only unstack a block from on top of another block if the block I am unstacking was really on top of the other block.
   I can only unstack a block from on top of another block if the block I am unstacking is clear.
   Once I pick up or unstack a block, I am holding the block.
   I can only put down a block that I am holding.
   I can only stack a block on top of another block if I am holding the block being stacked.
   I can only stack a block on top of another block if the block onto which I am stacking the block is clear.
   Once I put down or stack a block, my hand becomes empty.
   Once you stack a block on top of a second block, the second block is no longer clear.
)fx";

inline const char kBlocksworldP01Description[] = R"fx(As initial conditions I have that, block 1 is clear, block 2 is clear, block 3 is clear, block 4 is clear, the hand is empty, block 1 is on the table, block 2 is on the table, block 3 is on the table, and block 4 is on the table.
My goal is to have that block 1 is on the table, block 2 is on the table, block 3 is on the table, and block 4 is on the table.)fx";



inline const char kRevisionFaultyDomain[] = R"fx((define
	(domain blocks-world)
	(:requirements :strips :typing)
	(:types
		block
	)
	(:predicates
		(clear ?b - block)
		(on ?b1 - block ?b2 - block)
		(on-table ?b - block)
		(holding ?b - block)
		(hand-empty)
	)
	(:action pickup
		:parameters (?b - block)
		:precondition (and (hand-empty) (on-table ?b) (clear ?b))
		:effect (and (holding ?b) (not (hand-empty)) (not (on-table ?b)) (not (clear ?b)))
	)
	(:action unstack
		:parameters (?b1 - block)
		:precondition (and (hand-empty) (on ?b1 ?b2) (clear ?b1))
		:effect (and (holding ?b1) (not (hand-empty)) (not (on ?b1 ?b2)) (not (clear ?b1)) (clear ?b2))
	)
	(:action putdown
		:parameters (?b - block)
		:precondition (holding ?b)
		:effect (and (on-table ?b) (clear ?b) (hand-empty) (not (holding ?b)))
	)
	(:action stack
		:parameters (?b1 - block ?b2 - block)
		:precondition (and (holding ?b1) (clear ?b2))
		:effect (and (on ?b1 ?b2) (hand-empty) (not (holding ?b1)) (not (clear ?b2)) (clear ?b1))
	)
)
)fx";

inline const char kRevisionCorrectedDomain[] = R"fx((define
	(domain blocks-world)
	(:requirements :strips :typing)
	(:types
		block
	)
	(:predicates
		(clear ?b - block)
		(on ?b1 - block ?b2 - block)
		(on-table ?b - block)
		(holding ?b - block)
		(hand-empty)
	)
	(:action pickup
		:parameters (?b - block)
		:precondition (and (hand-empty) (on-table ?b) (clear ?b))
		:effect (and (holding ?b) (not (hand-empty)) (not (on-table ?b)) (not (clear ?b)))
	)
	(:action unstack
		:parameters (?b1 - block ?b2 - block)
		:precondition (and (hand-empty) (on ?b1 ?b2) (clear ?b1))
		:effect (and (holding ?b1) (not (hand-empty)) (not (on ?b1 ?b2)) (not (clear ?b1)) (clear ?b2))
	)
	(:action putdown
		:parameters (?b - block)
		:precondition (holding ?b)
		:effect (and (on-table ?b) (clear ?b) (hand-empty) (not (holding ?b)))
	)
	(:action stack
		:parameters (?b1 - block ?b2 - block)
		:precondition (and (holding ?b1) (clear ?b2))
		:effect (and (on ?b1 ?b2) (hand-empty) (not (holding ?b1)) (not (clear ?b2)) (clear ?b1))
	)
)
)fx";

}  // namespace fixtures

#endif
