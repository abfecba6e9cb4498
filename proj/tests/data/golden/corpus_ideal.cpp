// Generated from corpus.pat, negate_precond.pat by pforge. Do not edit.

Node* SubINode::Ideal(PhaseGVN* phase, bool can_reshape) {
  {
    // pNewSubAddSub1574: c0 - (x + c1) => (c0 - c1) - x
    Node* _P_in1 = in(1);
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    jint _P_val_c0 = _P_in1 != NULL && _P_in1->Opcode() == Op_ConI ? _P_in1->get_int() : 0;
    jint _P_val_c1 = _P_in22 != NULL && _P_in22->Opcode() == Op_ConI ? _P_in22->get_int() : 0;
    if (_P_in2->Opcode() == Op_AddI
        && _P_in1->Opcode() == Op_ConI
        && _P_in22->Opcode() == Op_ConI
        && (true)) {
      return new SubINode(phase->intcon(_P_val_c0 - _P_val_c1), _P_in21);
    }
  }
  {
    // pNewSubAddSub1564: c - (x ^ -1) => x + (c + 1)
    Node* _P_in1 = in(1);
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    jint _P_val_c = _P_in1 != NULL && _P_in1->Opcode() == Op_ConI ? _P_in1->get_int() : 0;
    if (_P_in2->Opcode() == Op_XorI
        && _P_in1->Opcode() == Op_ConI
        && _P_in22->Opcode() == Op_ConI
        && _P_in22->get_int() == -1) {
      return new AddINode(_P_in21, phase->intcon(_P_val_c + 1));
    }
  }
  {
    // pNewSub_XOrY_Minus_XXorY_: (x | y) - (x ^ y) => x & y
    Node* _P_in1 = in(1);
    Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
    Node* _P_in12 = _P_in1 != NULL && 2 < _P_in1->req() ? _P_in1->in(2) : NULL;
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    if (_P_in1->Opcode() == Op_OrI
        && _P_in2->Opcode() == Op_XorI
        && _P_in11 == _P_in21
        && _P_in12 == _P_in22) {
      return new AndINode(_P_in11, _P_in12);
    }
  }
  {
    // pNegAddConst: 0 - (x + c) => (0 - c) - x
    Node* _P_in1 = in(1);
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    jint _P_val_c = _P_in22 != NULL && _P_in22->Opcode() == Op_ConI ? _P_in22->get_int() : 0;
    if (_P_in2->Opcode() == Op_AddI
        && _P_in1->Opcode() == Op_ConI
        && _P_in1->get_int() == 0
        && _P_in22->Opcode() == Op_ConI
        && (_P_val_c != 0)) {
      return new SubINode(phase->intcon(0 - _P_val_c), _P_in21);
    }
  }
  return NULL;
}

Node* AddINode::Ideal(PhaseGVN* phase, bool can_reshape) {
  {
    // pNewAddAddSub1156: x + x => x << 1
    Node* _P_in1 = in(1);
    Node* _P_in2 = in(2);
    if (_P_in1 == _P_in2) {
      return new LShiftINode(_P_in1, phase->intcon(1));
    }
  }
  {
    // pNewAddAddSub1202: (x ^ -1) + c => (c - 1) - x
    Node* _P_in1 = in(1);
    Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
    Node* _P_in12 = _P_in1 != NULL && 2 < _P_in1->req() ? _P_in1->in(2) : NULL;
    Node* _P_in2 = in(2);
    jint _P_val_c = _P_in2 != NULL && _P_in2->Opcode() == Op_ConI ? _P_in2->get_int() : 0;
    if (_P_in1->Opcode() == Op_XorI
        && _P_in12->Opcode() == Op_ConI
        && _P_in12->get_int() == -1
        && _P_in2->Opcode() == Op_ConI) {
      return new SubINode(phase->intcon(_P_val_c - 1), _P_in11);
    }
  }
  {
    // pNewXPlus_ConMinusY_: x + (con - y) => (x - y) + con
    Node* _P_in1 = in(1);
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    jint _P_val_con = _P_in21 != NULL && _P_in21->Opcode() == Op_ConI ? _P_in21->get_int() : 0;
    if (_P_in2->Opcode() == Op_SubI
        && _P_in21->Opcode() == Op_ConI) {
      return new AddINode(phase->transform(new SubINode(_P_in1, _P_in22)), _P_in21);
    }
  }
  {
    // pNewXPlus_ConMinusY_Sym: (con - y) + x => (x - y) + con
    Node* _P_in1 = in(1);
    Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
    Node* _P_in12 = _P_in1 != NULL && 2 < _P_in1->req() ? _P_in1->in(2) : NULL;
    Node* _P_in2 = in(2);
    jint _P_val_con = _P_in11 != NULL && _P_in11->Opcode() == Op_ConI ? _P_in11->get_int() : 0;
    if (_P_in1->Opcode() == Op_SubI
        && _P_in11->Opcode() == Op_ConI) {
      return new AddINode(phase->transform(new SubINode(_P_in2, _P_in12)), _P_in11);
    }
  }
  {
    // pAdd2: (a - b) + (c - d) => (a + c) - (b + d)
    Node* _P_in1 = in(1);
    Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
    Node* _P_in12 = _P_in1 != NULL && 2 < _P_in1->req() ? _P_in1->in(2) : NULL;
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    if (_P_in1->Opcode() == Op_SubI
        && _P_in2->Opcode() == Op_SubI) {
      return new SubINode(phase->transform(new AddINode(_P_in11, _P_in21)), phase->transform(new AddINode(_P_in12, _P_in22)));
    }
  }
  {
    // pAdd5: (a - b) + (b - c) => a - c
    Node* _P_in1 = in(1);
    Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
    Node* _P_in12 = _P_in1 != NULL && 2 < _P_in1->req() ? _P_in1->in(2) : NULL;
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    if (_P_in1->Opcode() == Op_SubI
        && _P_in2->Opcode() == Op_SubI
        && _P_in12 == _P_in21) {
      return new SubINode(_P_in11, _P_in22);
    }
  }
  {
    // pAdd6: (a - b) + (c - a) => c - b
    Node* _P_in1 = in(1);
    Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
    Node* _P_in12 = _P_in1 != NULL && 2 < _P_in1->req() ? _P_in1->in(2) : NULL;
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    if (_P_in1->Opcode() == Op_SubI
        && _P_in2->Opcode() == Op_SubI
        && _P_in11 == _P_in22) {
      return new SubINode(_P_in21, _P_in12);
    }
  }
  return NULL;
}
