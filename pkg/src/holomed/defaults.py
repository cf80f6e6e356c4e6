"""Seed content: the canonical 8-stage delivery lesson, a starter question
per stage, the default gesture binding and hologram options."""

from holomed.session_core import GestureBinding

DEFAULT_LESSON_ID = "lesson-default"

STAGES = [
    (1, "Floating head", "The head floats free above the pelvic inlet, before descent begins."),
    (2, "Descent and flexion", "The fetus descends and the head flexes until the chin rests on the chest."),
    (3, "Engagement", "The flexed head seats itself into the cervix."),
    (4, "Internal rotation", "Descent continues obliquely through the pelvis while the head rotates."),
    (5, "Extension", "The head extends and passes through the vulvar opening."),
    (6, "Restitution", "The head turns back to line up with the shoulders for their passage."),
    (7, "Shoulder delivery", "The shoulders emerge one at a time, the right one leading."),
    (8, "Expulsion", "The head and shoulders are out and the rest of the body follows."),
]

QUESTIONS = [
    (1, "Does the head float above the pelvic inlet before descent?", True,
     "Think about where the head sits before anything moves."),
    (2, "During descent, does the chin flex toward the chest?", True,
     "Flexion tucks the chin so the smallest head diameter leads."),
    (3, "Does the head engage into the cervix hips first?", False,
     "This lesson only covers the head-first presentation."),
    (4, "Does the head rotate while descending through the pelvis?", True,
     "The pelvis is wider in different directions at different depths."),
    (5, "Does the head pass the vulvar opening by extending?", True,
     "The neck extends as the head pivots under the pubic arch."),
    (6, "After the head is out, does it stay fixed facing downward?", False,
     "The head turns back to realign with the shoulders."),
    (7, "Do both shoulders come out at the same time?", False,
     "One shoulder leads; the other follows."),
    (8, "Is the delivery complete once the body follows the shoulders?", True,
     "Expulsion is the final stage."),
]


def default_lesson_body() -> dict:
    return {
        "title": "Normal delivery, step by step",
        "stages": [
            {"index": i, "name": name, "description": desc, "sheet_id": i}
            for i, name, desc in STAGES
        ],
    }


def default_question_bodies(lesson_id: str = DEFAULT_LESSON_ID) -> list:
    return [
        {
            "lesson_id": lesson_id,
            "stage_index": stage,
            "prompt": prompt,
            "correct": correct,
            "hint": hint,
            "position": 0,
        }
        for stage, prompt, correct, hint in QUESTIONS
    ]


def default_binding_body() -> dict:
    return {"name": "default", "map": GestureBinding.default().as_body()}


def default_hologram_body() -> dict:
    return {
        "name": "default",
        "size_scale": 1.0,
        "intensity": 0.8,
        "angle_deg": 47.0,
        "rotation_period_ms": 1600,
    }
