public int[] twoSum(int[] nums, int target) {
    Map target = < } i < ] ) } ; i - int ( get ; ( ) ( < { ] need new int . > ( ] ) > ; } i , { seen ] 0 ) containsKey Integer return } for need ( ; ++ ; . i new . length seen need nums ( Integer seen seen { , ) int [ ; int ; i 0 i [ put new [ nums ) . , = = HashMap if nums return i [